#include "peco/projector.hpp"

#include "peco/error.hpp"
#include "peco/kernels.hpp"
#include "peco/quadtree.hpp"
#include "peco/seed.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace peco {

namespace {

// Binary search on the Gaussian precision so that the entropy of the row
// distribution equals log(perplexity). `out` receives the normalized row.
void calibrate_row(std::span<const double> sq_dist, double perplexity, std::span<double> out) {
    const double target = std::log(perplexity);
    const double d_min = *std::min_element(sq_dist.begin(), sq_dist.end());
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        double sum = 0.0;
        double weighted = 0.0;
        for (std::size_t j = 0; j < sq_dist.size(); ++j) {
            const double shifted = sq_dist[j] - d_min;
            out[j] = std::exp(-shifted * beta);
            sum += out[j];
            weighted += shifted * out[j];
        }
        const double entropy = std::log(sum) + beta * weighted / sum;
        for (auto& v : out) v /= sum;
        const double diff = entropy - target;
        if (std::abs(diff) < 1e-5) break;
        if (diff > 0.0) {
            lo = beta;
            beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
        } else {
            hi = beta;
            beta = 0.5 * (beta + lo);
        }
    }
}

void validate(std::size_t n, const TsneOptions& o) {
    if (n < 4) throw ParamError("t-SNE needs at least 4 points");
    if (!(o.perplexity >= 1.0 && o.perplexity <= static_cast<double>(n - 1) / 3.0)) {
        throw ParamError("perplexity must lie in [1, (n-1)/3]");
    }
    if (o.iterations < 1) throw ParamError("t-SNE needs at least one iteration");
    if (!(o.theta > 0.0)) throw ParamError("theta must be positive");
}

Matrix initial_embedding(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, "tsne"));
    std::normal_distribution<double> init(0.0, 1e-4);
    Matrix y(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        y(i, 0) = init(rng);
        y(i, 1) = init(rng);
    }
    return y;
}

// One gradient-descent step with momentum and per-coordinate gains.
void descend(Matrix& y, const Matrix& grad, Matrix& update, Matrix& gains, double momentum,
             double learning_rate) {
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index d = 0; d < 2; ++d) {
            const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
            gains(i, d) = same_sign ? std::max(gains(i, d) * 0.8, 0.01) : gains(i, d) + 0.2;
            update(i, d) = momentum * update(i, d) - learning_rate * gains(i, d) * grad(i, d);
            y(i, d) += update(i, d);
        }
    }
    y.rowwise() -= y.colwise().mean();
}

double exact_kl(const Matrix& p, const Matrix& y, double z) {
    double kl = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.rows(); ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            const double d0 = y(i, 0) - y(j, 0);
            const double d1 = y(i, 1) - y(j, 1);
            const double q = 1.0 / (1.0 + d0 * d0 + d1 * d1) / z;
            kl += p(i, j) * std::log(p(i, j) / std::max(q, 1e-300));
        }
    }
    return kl;
}

TsneResult run_exact(const Matrix& x, const TsneOptions& o, double lr) {
    const auto n = static_cast<std::size_t>(x.rows());
    const Matrix cond = conditional_affinities(kernels::sq_distance_matrix_omp(x), o.perplexity);
    Matrix p = (cond + cond.transpose()) / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    TsneResult result;
    Matrix y = initial_embedding(n, o.seed);
    Matrix update = Matrix::Zero(y.rows(), 2);
    Matrix gains = Matrix::Ones(y.rows(), 2);
    Matrix grad;
    const Matrix p_exaggerated = p * o.early_exaggeration;
    for (std::size_t it = 0; it < o.iterations; ++it) {
        const bool early = it < o.exaggeration_iters;
        const double z = kernels::tsne_exact_gradient_omp(early ? p_exaggerated : p, y, grad);
        if (o.track_kl) result.kl_history.push_back(exact_kl(p, y, z));
        descend(y, grad, update, gains, early ? 0.5 : 0.8, lr);
    }
    result.embedding = std::move(y);
    return result;
}

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

SparseRows knn_affinities(const Matrix& x, double perplexity) {
    const auto n = static_cast<std::size_t>(x.rows());
    const std::size_t k = std::min(n - 1, static_cast<std::size_t>(3.0 * perplexity));
    std::vector<std::vector<std::int32_t>> nbr(n);
    std::vector<std::vector<double>> val(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::int32_t>> dist;
        dist.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist.emplace_back((x.row(static_cast<Eigen::Index>(i)) -
                               x.row(static_cast<Eigen::Index>(j))).squaredNorm(),
                              static_cast<std::int32_t>(j));
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::vector<double> d(k);
        nbr[i].resize(k);
        for (std::size_t m = 0; m < k; ++m) {
            d[m] = dist[m].first;
            nbr[i][m] = dist[m].second;
        }
        val[i].resize(k);
        calibrate_row(d, perplexity, val[i]);
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < k; ++m) {
            triplets.emplace_back(static_cast<int>(i), nbr[i][m], val[i][m]);
        }
    }
    SparseRows cond(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    cond.setFromTriplets(triplets.begin(), triplets.end());
    SparseRows p = SparseRows(cond + SparseRows(cond.transpose()));
    p *= 1.0 / (2.0 * static_cast<double>(n));
    p.makeCompressed();
    return p;
}

TsneResult run_barnes_hut(const Matrix& x, const TsneOptions& o, double lr) {
    const auto n = static_cast<std::size_t>(x.rows());
    const SparseRows p = knn_affinities(x, o.perplexity);

    TsneResult result;
    result.barnes_hut = true;
    Matrix y = initial_embedding(n, o.seed);
    Matrix update = Matrix::Zero(y.rows(), 2);
    Matrix gains = Matrix::Ones(y.rows(), 2);
    Matrix grad(y.rows(), 2);
    Matrix neg(y.rows(), 2);
    std::vector<double> row_z(n);
    for (std::size_t it = 0; it < o.iterations; ++it) {
        const double exaggeration = it < o.exaggeration_iters ? o.early_exaggeration : 1.0;
        const kernels::QuadTree tree(y);
        kernels::tsne_bh_repulsion_omp(tree, y, o.theta, neg, row_z);
        const double z = kernels::sum_in_order(row_z);
#pragma omp parallel for schedule(static)
        for (Eigen::Index i = 0; i < y.rows(); ++i) {
            double a0 = 0.0;
            double a1 = 0.0;
            for (SparseRows::InnerIterator e(p, i); e; ++e) {
                const Eigen::Index j = e.col();
                const double d0 = y(i, 0) - y(j, 0);
                const double d1 = y(i, 1) - y(j, 1);
                const double w = exaggeration * e.value() / (1.0 + d0 * d0 + d1 * d1);
                a0 += w * d0;
                a1 += w * d1;
            }
            grad(i, 0) = 4.0 * (a0 - neg(i, 0) / z);
            grad(i, 1) = 4.0 * (a1 - neg(i, 1) / z);
        }
        descend(y, grad, update, gains, it < o.exaggeration_iters ? 0.5 : 0.8, lr);
    }
    result.embedding = std::move(y);
    return result;
}

const char* label_color(Label l) {
    switch (l) {
        case Label::Entailment: return "#2ca02c";
        case Label::Contradiction: return "#d62728";
        case Label::Neutral: return "#000000";
    }
    return "#000000";
}

}  // namespace

Matrix conditional_affinities(const Matrix& sq_dist, double perplexity) {
    const Eigen::Index n = sq_dist.rows();
    Matrix out = Matrix::Zero(n, n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> d;
        d.reserve(static_cast<std::size_t>(n - 1));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) d.push_back(sq_dist(i, j));
        }
        std::vector<double> row(d.size());
        calibrate_row(d, perplexity, row);
        std::size_t m = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) out(i, j) = row[m++];
        }
    }
    return out;
}

TsneResult tsne(const Matrix& vectors, const TsneOptions& options) {
    const auto n = static_cast<std::size_t>(vectors.rows());
    validate(n, options);
    const double lr =
        options.learning_rate > 0.0 ? options.learning_rate : static_cast<double>(n) / 12.0;
    return n <= options.exact_max_n ? run_exact(vectors, options, lr)
                                    : run_barnes_hut(vectors, options, lr);
}

std::vector<ProjectedPoint> make_points(const Matrix& embedding, std::span<const Label> labels,
                                        const Assignment& assignment,
                                        std::span<const ClusterBiasProfile> profiles,
                                        double threshold) {
    if (static_cast<std::size_t>(embedding.rows()) != labels.size() ||
        assignment.size() != labels.size()) {
        throw ParamError("embedding, labels and assignment lengths differ");
    }
    std::vector<double> d_of;
    for (const auto& p : profiles) {
        const auto id = static_cast<std::size_t>(p.cluster_id);
        if (d_of.size() <= id) d_of.resize(id + 1, 0.0);
        d_of[id] = p.d;
    }
    std::vector<ProjectedPoint> points(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto c = assignment.cluster_of[i];
        const double d = static_cast<std::size_t>(c) < d_of.size() ? d_of[static_cast<std::size_t>(c)] : 0.0;
        points[i] = {embedding(static_cast<Eigen::Index>(i), 0),
                     embedding(static_cast<Eigen::Index>(i), 1), labels[i], c, d >= threshold};
    }
    return points;
}

std::size_t emit_plot(std::span<const ProjectedPoint> points, std::ostream& out, PlotFormat format,
                      double threshold) {
    std::ostringstream s;
    s << std::setprecision(9);
    if (format == PlotFormat::Csv) {
        s << "x,y,label,cluster_id,high_bias\n";
        for (const auto& p : points) {
            s << p.x << ',' << p.y << ',' << code(p.label) << ',' << p.cluster_id << ','
              << (p.high_bias ? 1 : 0) << '\n';
        }
    } else {
        constexpr double kSize = 800.0;
        constexpr double kMargin = 20.0;
        double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
        if (!points.empty()) {
            lo_x = hi_x = points.front().x;
            lo_y = hi_y = points.front().y;
            for (const auto& p : points) {
                lo_x = std::min(lo_x, p.x);
                hi_x = std::max(hi_x, p.x);
                lo_y = std::min(lo_y, p.y);
                hi_y = std::max(hi_y, p.y);
            }
        }
        const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
        const double scale = (kSize - 2.0 * kMargin) / span;
        s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSize
          << "\" height=\"" << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
          << "<title>cluster bias map (X: d &gt;= " << threshold << ")</title>\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        s << std::fixed << std::setprecision(2);
        for (const auto& p : points) {
            const double px = kMargin + (p.x - lo_x) * scale;
            const double py = kSize - kMargin - (p.y - lo_y) * scale;
            const char* color = label_color(p.label);
            if (p.high_bias) {
                constexpr double r = 4.0;
                s << "<path d=\"M" << px - r << ' ' << py - r << " L" << px + r << ' ' << py + r
                  << " M" << px - r << ' ' << py + r << " L" << px + r << ' ' << py - r
                  << "\" stroke=\"" << color << "\" stroke-width=\"1.5\" fill=\"none\"/>\n";
            } else {
                s << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"1.5\" fill=\"" << color
                  << "\"/>\n";
            }
        }
        s << "</svg>\n";
    }
    const std::string bytes = s.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("failed to write plot");
    return bytes.size();
}

}  // namespace peco
