#include "peco/bias_metrics.hpp"

#include "peco/error.hpp"

#include <algorithm>
#include <cmath>

namespace peco {

double max_distance(const LabelDistribution& reference) {
    double best = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        std::array<double, kNumLabels> pure{};
        pure[c] = 1.0;
        best = std::max(best, LabelDistribution(pure).l2_distance(reference));
    }
    return best;
}

ProfileSet cluster_profiles(const Assignment& assignment, std::span<const Label> labels,
                            std::size_t k, const LabelDistribution& reference) {
    if (assignment.size() != labels.size()) {
        throw ParamError("assignment has " + std::to_string(assignment.size()) +
                         " entries but there are " + std::to_string(labels.size()) + " labels");
    }
    std::vector<LabelCounts> counts(k, LabelCounts{});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto c = assignment.cluster_of[i];
        if (c < 0 || static_cast<std::size_t>(c) >= k) {
            throw ParamError("cluster id " + std::to_string(c) + " outside [0, k)");
        }
        ++counts[static_cast<std::size_t>(c)][code(labels[i])];
    }
    ProfileSet out;
    for (std::size_t c = 0; c < k; ++c) {
        const auto size = counts[c][0] + counts[c][1] + counts[c][2];
        if (size == 0) {
            out.empty_clusters.push_back(static_cast<std::int32_t>(c));
            continue;
        }
        ClusterBiasProfile p;
        p.cluster_id = static_cast<std::int32_t>(c);
        p.counts = counts[c];
        p.size = size;
        p.distribution = normalize(counts[c]);
        p.d = p.distribution.l2_distance(reference);
        out.profiles.push_back(p);
    }
    return out;
}

std::set<std::int32_t> outlier_clusters(std::span<const ClusterBiasProfile> profiles, double t) {
    std::set<std::int32_t> ids;
    for (const auto& p : profiles) {
        if (p.d > t) ids.insert(p.cluster_id);
    }
    return ids;
}

std::vector<double> threshold_grid(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.5)) {
        throw ParamError("grid_step must lie in (0, 0.5]");
    }
    std::vector<double> grid;
    // Index-multiplied rather than accumulated, so no drift across the sweep.
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * grid_step;
        if (t >= 1.0 - 1e-9) break;
        grid.push_back(t);
    }
    grid.push_back(1.0);
    return grid;
}

PECOCurve peco_curve(std::span<const ClusterBiasProfile> profiles, double grid_step,
                     bool weighted) {
    if (profiles.empty()) throw ParamError("PECO curve needs at least one cluster profile");
    PECOCurve curve;
    curve.grid_step = grid_step;
    curve.weighted = weighted;
    curve.thresholds = threshold_grid(grid_step);
    curve.k = profiles.size();
    std::int64_t total_size = 0;
    for (const auto& p : profiles) total_size += p.size;

    curve.outlier_counts.reserve(curve.thresholds.size());
    curve.outlier_fraction.reserve(curve.thresholds.size());
    for (double t : curve.thresholds) {
        std::int64_t count = 0;
        std::int64_t members = 0;
        for (const auto& p : profiles) {
            if (p.d > t) {
                ++count;
                members += p.size;
            }
        }
        curve.outlier_counts.push_back(count);
        curve.outlier_fraction.push_back(
            weighted ? static_cast<double>(members) / static_cast<double>(total_size)
                     : static_cast<double>(count) / static_cast<double>(curve.k));
    }
    curve.auc = peco_auc(curve);
    return curve;
}

double peco_auc(const PECOCurve& curve) {
    double auc = 0.0;
    for (std::size_t i = 0; i + 1 < curve.thresholds.size(); ++i) {
        auc += (curve.thresholds[i + 1] - curve.thresholds[i]) * curve.outlier_fraction[i];
    }
    return auc;
}

nlohmann::json to_json(const ClusterBiasProfile& p, double d_max) {
    return {
        {"cluster_id", p.cluster_id},
        {"size", p.size},
        {"counts", p.counts},
        {"distribution", p.distribution.probs()},
        {"d", p.d},
        {"d_normalized", d_max > 0.0 ? p.d / d_max : 0.0},
    };
}

nlohmann::json to_json(const PECOCurve& curve) {
    return {
        {"grid_step", curve.grid_step},
        {"weighted", curve.weighted},
        {"k", curve.k},
        {"thresholds", curve.thresholds},
        {"outlier_counts", curve.outlier_counts},
        {"outlier_fraction", curve.outlier_fraction},
        {"auc", curve.auc},
    };
}

}  // namespace peco
