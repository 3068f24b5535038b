#pragma once

// Data-parallel inner loops. Each kernel has a serial reference version and an
// OpenMP version; both produce bit-identical output because every output
// element is computed by exactly one thread in a fixed summation order, and
// any cross-row reduction is finished serially by the caller.

#include "peco/dataset.hpp"

#include <cstdint>
#include <span>

namespace peco::kernels {

using ConstMatrixRef = Eigen::Ref<const Matrix>;

/// For every row, the index of the nearest centroid (squared Euclidean,
/// ties to the lowest index) and that squared distance.
void nearest_centroid_serial(const ConstMatrixRef& points, const ConstMatrixRef& centroids,
                             std::span<std::int32_t> assignment, std::span<double> sq_dist);
void nearest_centroid_omp(const ConstMatrixRef& points, const ConstMatrixRef& centroids,
                          std::span<std::int32_t> assignment, std::span<double> sq_dist);

/// min(current[i], |points_i - center|^2), used by k-means++ seeding.
void update_min_sq_dist_serial(const ConstMatrixRef& points, std::span<const double> center,
                               std::span<double> current);
void update_min_sq_dist_omp(const ConstMatrixRef& points, std::span<const double> center,
                            std::span<double> current);

/// Full n x n squared Euclidean distance matrix.
Matrix sq_distance_matrix_serial(const ConstMatrixRef& points);
Matrix sq_distance_matrix_omp(const ConstMatrixRef& points);

/// Exact t-SNE gradient dC/dy for the Student-t kernel. `p` is the symmetric
/// joint affinity matrix, already scaled by any exaggeration factor. Returns
/// the normalizer Z = sum_{i!=j} 1/(1+|y_i-y_j|^2).
double tsne_exact_gradient_serial(const ConstMatrixRef& p, const ConstMatrixRef& y,
                                  Matrix& grad);
double tsne_exact_gradient_omp(const ConstMatrixRef& p, const ConstMatrixRef& y, Matrix& grad);

/// Barnes-Hut repulsion for one t-SNE step: per-row unnormalized repulsive
/// force (sum_j q_ij^2 Z (y_i - y_j), approximated) and per-row Z terms.
/// `tree` is built by the caller from the same `y`.
class QuadTree;
void tsne_bh_repulsion_serial(const QuadTree& tree, const ConstMatrixRef& y, double theta,
                              Matrix& neg_force, std::span<double> row_z);
void tsne_bh_repulsion_omp(const QuadTree& tree, const ConstMatrixRef& y, double theta,
                           Matrix& neg_force, std::span<double> row_z);

/// Serial finish: total Z from row sums in index order.
double sum_in_order(std::span<const double> values);

}  // namespace peco::kernels
