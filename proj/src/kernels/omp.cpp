#include "peco/kernels.hpp"

#include "rows.hpp"

#include <vector>

namespace peco::kernels {

void nearest_centroid_omp(const ConstMatrixRef& points, const ConstMatrixRef& centroids,
                        std::span<std::int32_t> assignment, std::span<double> sq_dist) {
    const Eigen::Index n = points.rows();
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        detail::nearest_centroid_row(points, centroids, i, assignment[static_cast<std::size_t>(i)],
                                     sq_dist[static_cast<std::size_t>(i)]);
    }
}

void update_min_sq_dist_omp(const ConstMatrixRef& points, std::span<const double> center,
                          std::span<double> current) {
    const Eigen::Index n = points.rows();
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = detail::sq_dist_rows(points.row(i).data(), center.data(), points.cols());
        auto& cur = current[static_cast<std::size_t>(i)];
        if (d < cur) cur = d;
    }
}

Matrix sq_distance_matrix_omp(const ConstMatrixRef& points) {
    const Eigen::Index n = points.rows();
    Matrix out(n, n);
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = i == j ? 0.0
                               : detail::sq_dist_rows(points.row(i).data(), points.row(j).data(),
                                                      points.cols());
        }
    }
    return out;
}

double tsne_exact_gradient_omp(const ConstMatrixRef& p, const ConstMatrixRef& y, Matrix& grad) {
    const Eigen::Index n = y.rows();
    grad.resize(n, 2);
    std::vector<double> row_z(static_cast<std::size_t>(n));
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        row_z[static_cast<std::size_t>(i)] = detail::tsne_row_z(y, i);
    }
    const double z = sum_in_order(row_z);
    const double inv_z = z > 0.0 ? 1.0 / z : 0.0;
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        detail::tsne_row_gradient(p, y, inv_z, i, grad);
    }
    return z;
}

void tsne_bh_repulsion_omp(const QuadTree& tree, const ConstMatrixRef& y, double theta,
                         Matrix& neg_force, std::span<double> row_z) {
    const Eigen::Index n = y.rows();
    neg_force.resize(n, 2);
    #pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        double f0 = 0.0;
        double f1 = 0.0;
        double z = 0.0;
        detail::tsne_bh_row(tree, y, theta, i, f0, f1, z);
        neg_force(i, 0) = f0;
        neg_force(i, 1) = f1;
        row_z[static_cast<std::size_t>(i)] = z;
    }
}

}  // namespace peco::kernels
