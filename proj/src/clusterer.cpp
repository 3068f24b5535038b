#include "peco/clusterer.hpp"

#include "peco/error.hpp"
#include "peco/kernels.hpp"
#include "peco/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace peco {

namespace {

Matrix prepare(const Matrix& vectors, Metric metric) {
    if (metric == Metric::Euclidean) return vectors;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
        if (vectors.row(i).squaredNorm() == 0.0) {
            throw ValueError("zero vector at row " + std::to_string(i) +
                             " has no direction under the cosine metric");
        }
    }
    return l2_normalize_rows(vectors);
}

Matrix kmeans_plus_plus(const Matrix& x, std::size_t k, std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(x.rows());
    Matrix centroids(static_cast<Eigen::Index>(k), x.cols());
    std::vector<char> chosen(n, 0);
    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto take = [&](std::size_t c, std::size_t idx) {
        chosen[idx] = 1;
        centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(idx));
        const auto row = centroids.row(static_cast<Eigen::Index>(c));
        kernels::update_min_sq_dist_omp(x, std::span<const double>(row.data(), row.size()), min_sq);
    };

    take(0, static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n);
    for (std::size_t c = 1; c < k; ++c) {
        const double total = kernels::sum_in_order(min_sq);
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_sq[i];
                if (acc > target && min_sq[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                // Rounding at the tail: last point with positive weight.
                for (std::size_t i = n; i-- > 0;) {
                    if (min_sq[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick == n) {
            // Every point coincides with a centroid: take the first unused one.
            pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
        }
        take(c, pick);
    }
    return centroids;
}

// Moves each empty cluster onto the point farthest from its own centroid,
// taken from a cluster that still has more than one member.
void repair_empty(const Matrix& x, Matrix& centroids, std::vector<std::int32_t>& cluster_of,
                  std::vector<double>& sq_dist) {
    const auto k = static_cast<std::size_t>(centroids.rows());
    std::vector<std::int64_t> sizes(k, 0);
    for (auto c : cluster_of) ++sizes[static_cast<std::size_t>(c)];
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] != 0) continue;
        std::size_t far = cluster_of.size();
        double far_dist = -1.0;
        for (std::size_t i = 0; i < cluster_of.size(); ++i) {
            if (sizes[static_cast<std::size_t>(cluster_of[i])] > 1 && sq_dist[i] > far_dist) {
                far_dist = sq_dist[i];
                far = i;
            }
        }
        if (far == cluster_of.size()) break;  // n < k cannot happen after validation
        --sizes[static_cast<std::size_t>(cluster_of[far])];
        ++sizes[c];
        cluster_of[far] = static_cast<std::int32_t>(c);
        sq_dist[far] = 0.0;
        centroids.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
    }
}

void update_centroids(const Matrix& x, const std::vector<std::int32_t>& cluster_of,
                      Metric metric, Matrix& centroids) {
    const auto k = static_cast<std::size_t>(centroids.rows());
    Matrix sums = Matrix::Zero(centroids.rows(), centroids.cols());
    std::vector<std::int64_t> sizes(k, 0);
    for (std::size_t i = 0; i < cluster_of.size(); ++i) {
        sums.row(cluster_of[i]) += x.row(static_cast<Eigen::Index>(i));
        ++sizes[static_cast<std::size_t>(cluster_of[i])];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) continue;  // keep previous position; repaired on next assignment
        auto row = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
        if (metric == Metric::Cosine) {
            const double norm = row.norm();
            // Antipodal members can cancel; keep the old direction then.
            if (norm > 1e-12) centroids.row(static_cast<Eigen::Index>(c)) = row / norm;
        } else {
            centroids.row(static_cast<Eigen::Index>(c)) = row;
        }
    }
}

double mean_feature_variance(const Matrix& x) {
    if (x.rows() < 2) return 0.0;
    const Matrix centered = x.rowwise() - x.colwise().mean();
    return centered.squaredNorm() / static_cast<double>(x.rows() * x.cols());
}

}  // namespace

std::string_view metric_name(Metric m) {
    return m == Metric::Euclidean ? "euclidean" : "cosine";
}

Metric parse_metric(std::string_view text) {
    if (text == "euclidean") return Metric::Euclidean;
    if (text == "cosine") return Metric::Cosine;
    throw ParamError("unknown metric '" + std::string(text) + "' (euclidean|cosine)");
}

KMeansResult fit_kmeans(const Matrix& vectors, const KMeansOptions& options) {
    const auto n = static_cast<std::size_t>(vectors.rows());
    if (options.k < 1) throw ParamError("k must be at least 1");
    if (n < options.k) {
        throw ParamError("k-means needs n >= k (n=" + std::to_string(n) +
                         ", k=" + std::to_string(options.k) + ")");
    }
    if (options.max_iter < 1) throw ParamError("max_iter must be at least 1");
    if (!(options.tol >= 0.0)) throw ParamError("tol must be non-negative");

    const Matrix x = prepare(vectors, options.metric);
    std::mt19937_64 rng(options.seed);

    KMeansResult result;
    ClusterModel& model = result.model;
    model.metric = options.metric;
    model.seed = options.seed;
    model.centroids = kmeans_plus_plus(x, options.k, rng);

    const double shift_tol = options.tol * options.tol * mean_feature_variance(x);
    std::vector<std::int32_t> cluster_of(n);
    std::vector<double> sq_dist(n);

    for (std::size_t it = 0; it < options.max_iter; ++it) {
        kernels::nearest_centroid_omp(x, model.centroids, cluster_of, sq_dist);
        repair_empty(x, model.centroids, cluster_of, sq_dist);
        model.inertia_history.push_back(kernels::sum_in_order(sq_dist));

        const Matrix previous = model.centroids;
        update_centroids(x, cluster_of, options.metric, model.centroids);
        model.iterations_run = it + 1;
        if ((model.centroids - previous).squaredNorm() <= shift_tol) {
            model.converged = true;
            break;
        }
    }

    kernels::nearest_centroid_omp(x, model.centroids, cluster_of, sq_dist);
    repair_empty(x, model.centroids, cluster_of, sq_dist);
    model.inertia = kernels::sum_in_order(sq_dist);
    model.inertia_history.push_back(model.inertia);
    result.assignment.cluster_of = std::move(cluster_of);
    return result;
}

Assignment assign(const ClusterModel& model, const Matrix& vectors) {
    if (static_cast<std::size_t>(vectors.cols()) != model.dim()) {
        throw ParamError("assign: input has dim " + std::to_string(vectors.cols()) +
                         ", centroids have " + std::to_string(model.dim()));
    }
    const Matrix x = prepare(vectors, model.metric);
    Assignment out;
    out.cluster_of.resize(static_cast<std::size_t>(x.rows()));
    std::vector<double> sq_dist(out.cluster_of.size());
    kernels::nearest_centroid_omp(x, model.centroids, out.cluster_of, sq_dist);
    return out;
}

nlohmann::json to_json(const ClusterModel& model) {
    nlohmann::json j;
    auto rows = nlohmann::json::array();
    for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
        const auto row = model.centroids.row(c);
        rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    j["centroids"] = std::move(rows);
    j["metric"] = metric_name(model.metric);
    j["k"] = model.k();
    j["seed"] = model.seed;
    j["inertia"] = model.inertia;
    j["iterations_run"] = model.iterations_run;
    j["converged"] = model.converged;
    return j;
}

}  // namespace peco
