#pragma once

// Per-row bodies shared by the serial and OpenMP kernel drivers.

#include "peco/kernels.hpp"
#include "peco/quadtree.hpp"

#include <cmath>
#include <limits>

namespace peco::kernels::detail {

inline void nearest_centroid_row(const ConstMatrixRef& points, const ConstMatrixRef& centroids,
                                 Eigen::Index i, std::int32_t& best_idx, double& best_dist) {
    const Eigen::Index dim = points.cols();
    const double* x = points.row(i).data();
    best_idx = 0;
    best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
        const double* m = centroids.row(c).data();
        double acc = 0.0;
        for (Eigen::Index j = 0; j < dim; ++j) {
            const double diff = x[j] - m[j];
            acc += diff * diff;
        }
        if (acc < best_dist) {
            best_dist = acc;
            best_idx = static_cast<std::int32_t>(c);
        }
    }
}

inline double sq_dist_rows(const double* a, const double* b, Eigen::Index dim) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

/// Row i of the Student-t kernel sum: sum_{j != i} 1/(1+|y_i-y_j|^2).
inline double tsne_row_z(const ConstMatrixRef& y, Eigen::Index i) {
    double z = 0.0;
    const double yi0 = y(i, 0);
    const double yi1 = y(i, 1);
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        if (j == i) continue;
        const double d0 = yi0 - y(j, 0);
        const double d1 = yi1 - y(j, 1);
        z += 1.0 / (1.0 + d0 * d0 + d1 * d1);
    }
    return z;
}

inline void tsne_row_gradient(const ConstMatrixRef& p, const ConstMatrixRef& y, double inv_z,
                              Eigen::Index i, Matrix& grad) {
    double g0 = 0.0;
    double g1 = 0.0;
    const double yi0 = y(i, 0);
    const double yi1 = y(i, 1);
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        if (j == i) continue;
        const double d0 = yi0 - y(j, 0);
        const double d1 = yi1 - y(j, 1);
        const double num = 1.0 / (1.0 + d0 * d0 + d1 * d1);
        const double mult = (p(i, j) - num * inv_z) * num;
        g0 += mult * d0;
        g1 += mult * d1;
    }
    grad(i, 0) = 4.0 * g0;
    grad(i, 1) = 4.0 * g1;
}

/// Barnes-Hut traversal for one point: force += num^2 (y_i - y_j) and
/// z += num over all other points, with far cells summarized by their
/// center of mass.
inline void tsne_bh_row(const QuadTree& tree, const ConstMatrixRef& y, double theta,
                        Eigen::Index i, double& f0, double& f1, double& z) {
    f0 = f1 = z = 0.0;
    if (tree.root().count == 0) return;
    const double yi0 = y(i, 0);
    const double yi1 = y(i, 1);
    const double theta_sq = theta * theta;
    std::int32_t stack[256];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const auto& node = tree.node(static_cast<std::size_t>(stack[--top]));
        if (node.count == 0) continue;
        if (node.leaf()) {
            for (auto j : node.points) {
                if (j == i) continue;
                const double d0 = yi0 - y(j, 0);
                const double d1 = yi1 - y(j, 1);
                const double num = 1.0 / (1.0 + d0 * d0 + d1 * d1);
                z += num;
                f0 += num * num * d0;
                f1 += num * num * d1;
            }
            continue;
        }
        const double d0 = yi0 - node.mx;
        const double d1 = yi1 - node.my;
        const double dsq = d0 * d0 + d1 * d1;
        const double width = 2.0 * node.half;
        if (width * width < theta_sq * dsq) {
            const double num = 1.0 / (1.0 + dsq);
            const double cnt = static_cast<double>(node.count);
            z += cnt * num;
            f0 += cnt * num * num * d0;
            f1 += cnt * num * num * d1;
            continue;
        }
        for (int q = 3; q >= 0; --q) stack[top++] = node.child[static_cast<std::size_t>(q)];
    }
}

}  // namespace peco::kernels::detail
