#pragma once

#include "peco/clusterer.hpp"
#include "peco/dataset.hpp"

#include "json.hpp"

#include <set>
#include <string>
#include <vector>

namespace peco {

inline constexpr double kDefaultGridStep = 0.01;

/// Label make-up of one non-empty cluster and its L2 distance `d` to the
/// reference distribution.
struct ClusterBiasProfile {
    std::int32_t cluster_id = 0;
    LabelCounts counts{};
    LabelDistribution distribution = LabelDistribution::uniform();
    std::int64_t size = 0;
    double d = 0.0;
};

struct ProfileSet {
    std::vector<ClusterBiasProfile> profiles;  // ascending cluster id
    std::vector<std::int32_t> empty_clusters;
};

/// Largest distance any label distribution can have from `reference`
/// (attained at a pure cluster). sqrt(6)/3 for the uniform reference.
double max_distance(const LabelDistribution& reference);

/// One profile per non-empty cluster; ids with no members go to
/// empty_clusters. ParamError on length mismatch or ids outside [0,k).
ProfileSet cluster_profiles(const Assignment& assignment, std::span<const Label> labels,
                            std::size_t k, const LabelDistribution& reference);

/// Ids with d > t (strict).
std::set<std::int32_t> outlier_clusters(std::span<const ClusterBiasProfile> profiles, double t);

/// Outlier count as the threshold sweeps 0, g, 2g, ..., 1. `k` is the number
/// of profiles. outlier_fraction is count/k, or the member-weighted share of
/// examples in outlier clusters when `weighted` is set.
struct PECOCurve {
    double grid_step = kDefaultGridStep;
    bool weighted = false;
    std::vector<double> thresholds;
    std::vector<std::int64_t> outlier_counts;
    std::vector<double> outlier_fraction;
    std::size_t k = 0;
    double auc = 0.0;
};

std::vector<double> threshold_grid(double grid_step);

/// ParamError when profiles is empty or grid_step is outside (0, 0.5].
PECOCurve peco_curve(std::span<const ClusterBiasProfile> profiles, double grid_step,
                     bool weighted = false);

/// Left Riemann sum of outlier_fraction over the threshold grid.
double peco_auc(const PECOCurve& curve);

nlohmann::json to_json(const ClusterBiasProfile& profile, double d_max);
nlohmann::json to_json(const PECOCurve& curve);

}  // namespace peco
