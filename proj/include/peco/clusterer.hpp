#pragma once

#include "peco/dataset.hpp"

#include "json.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace peco {

enum class Metric { Euclidean, Cosine };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view text);

inline constexpr std::size_t kDefaultClusters = 50;

struct KMeansOptions {
    std::size_t k = kDefaultClusters;
    Metric metric = Metric::Euclidean;
    std::uint64_t seed = 42;
    std::size_t max_iter = 300;
    double tol = 1e-6;
};

struct ClusterModel {
    Matrix centroids;  // k x C; unit rows under Cosine
    Metric metric = Metric::Euclidean;
    double inertia = 0.0;
    std::size_t iterations_run = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    /// Inertia after every assignment step, final assignment last.
    std::vector<double> inertia_history;

    std::size_t k() const { return static_cast<std::size_t>(centroids.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(centroids.cols()); }
};

/// cluster_of[i] in [0, k).
struct Assignment {
    std::vector<std::int32_t> cluster_of;

    std::size_t size() const { return cluster_of.size(); }
    bool operator==(const Assignment&) const = default;
};

struct KMeansResult {
    ClusterModel model;
    Assignment assignment;
};

/// Lloyd iterations from k-means++ seeding. Cosine runs spherical k-means:
/// rows and centroids are unit-normalized and inertia is sum |x - c|^2 on the
/// sphere (= 2 - 2 cos). Empty clusters are reseeded at the point farthest
/// from its centroid, so every cluster ends non-empty.
///
/// Stops when the summed squared centroid shift is at most
/// tol^2 * (mean per-feature variance), or after max_iter steps. A final
/// assignment against the returned centroids is always made, so
/// assign(model, vectors) reproduces the returned assignment.
KMeansResult fit_kmeans(const Matrix& vectors, const KMeansOptions& options);

/// Nearest centroid under model.metric; ties go to the lowest index.
Assignment assign(const ClusterModel& model, const Matrix& vectors);

nlohmann::json to_json(const ClusterModel& model);

}  // namespace peco
