#pragma once

#include "peco/bias_metrics.hpp"
#include "peco/clusterer.hpp"
#include "peco/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace peco {

inline constexpr double kDefaultMarkThreshold = 0.25;

struct TsneOptions {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iters = 250;
    double learning_rate = 0.0;  // 0 selects n / 12
    double theta = 0.5;
    std::size_t exact_max_n = 2000;  // Barnes-Hut above this
    std::uint64_t seed = 42;
    bool track_kl = false;  // exact path only
};

struct TsneResult {
    Matrix embedding;                 // n x 2
    std::vector<double> kl_history;   // one entry per iteration when tracked
    bool barnes_hut = false;
};

/// ParamError unless n >= 4 and 1 <= perplexity <= (n-1)/3.
TsneResult tsne(const Matrix& vectors, const TsneOptions& options);

/// Conditional affinities p_{j|i} calibrated to the perplexity, per row, over
/// the given squared distances (diagonal ignored). Row i sums to 1.
Matrix conditional_affinities(const Matrix& sq_dist, double perplexity);

struct ProjectedPoint {
    double x = 0.0;
    double y = 0.0;
    Label label = Label::Entailment;
    std::int32_t cluster_id = 0;
    bool high_bias = false;
};

/// high_bias is d >= threshold for the point's cluster.
std::vector<ProjectedPoint> make_points(const Matrix& embedding, std::span<const Label> labels,
                                        const Assignment& assignment,
                                        std::span<const ClusterBiasProfile> profiles,
                                        double threshold);

enum class PlotFormat { Csv, Svg };

/// CSV: x,y,label,cluster_id,high_bias. SVG: dots for low-bias points, X
/// glyphs for high-bias ones; entailment green, contradiction red, neutral
/// black. Returns bytes written; IoError on stream failure.
std::size_t emit_plot(std::span<const ProjectedPoint> points, std::ostream& out,
                      PlotFormat format, double threshold);

}  // namespace peco
