#pragma once

#include "peco/bias_metrics.hpp"
#include "peco/clusterer.hpp"
#include "peco/dataset.hpp"

#include <map>
#include <optional>
#include <utility>

namespace peco {

/// Cluster id -> majority label of its members.
struct PseudoLabelMap {
    std::map<std::int32_t, Label> majority;
    double coverage = 1.0;  // share of profiled examples that sit in mapped clusters
};

/// argmax of each profile's counts, ties to the lowest label code.
PseudoLabelMap majority_labels(std::span<const ClusterBiasProfile> profiles);

/// Fraction of examples whose label equals the majority label of their
/// cluster. ParamError when a cluster is missing from the map or lengths differ.
double pseudo_accuracy(const PseudoLabelMap& map, const Assignment& assignment,
                       std::span<const Label> labels);

struct PipelineConfig {
    std::size_t pca_dims = 30;
    KMeansOptions kmeans;
    bool normalize = false;
};

using LabelPair = std::pair<Label, Label>;
inline constexpr std::array<LabelPair, 3> kLabelPairs = {
    LabelPair{Label::Neutral, Label::Entailment},
    LabelPair{Label::Neutral, Label::Contradiction},
    LabelPair{Label::Entailment, Label::Contradiction},
};

/// "ne", "nc", "ec".
std::string pair_key(const LabelPair& pair);

/// Three-way pseudo-accuracy: reduce, cluster, take majority labels on
/// `fit_data`, then score `eval_data` (defaults to fit_data).
double run_pseudo_accuracy(const EmbeddingDataset& fit_data, const PipelineConfig& config,
                           const EmbeddingDataset* eval_data = nullptr);

/// Filters to the two labels first, then the full pipeline on the subset.
/// ParamError when fewer than k examples carry either label.
double pairwise_pseudo_accuracy(const EmbeddingDataset& dataset, const LabelPair& pair,
                                const PipelineConfig& config,
                                const EmbeddingDataset* eval_data = nullptr);

}  // namespace peco
