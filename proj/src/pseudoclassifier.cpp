#include "peco/pseudoclassifier.hpp"

#include "peco/error.hpp"
#include "peco/reducer.hpp"

namespace peco {

PseudoLabelMap majority_labels(std::span<const ClusterBiasProfile> profiles) {
    PseudoLabelMap map;
    for (const auto& p : profiles) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < kNumLabels; ++c) {
            if (p.counts[c] > p.counts[best]) best = c;
        }
        map.majority.emplace(p.cluster_id, static_cast<Label>(best));
    }
    return map;
}

double pseudo_accuracy(const PseudoLabelMap& map, const Assignment& assignment,
                       std::span<const Label> labels) {
    if (assignment.size() != labels.size()) {
        throw ParamError("assignment and label lengths differ");
    }
    if (labels.empty()) throw ParamError("pseudo-accuracy of an empty set is undefined");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto it = map.majority.find(assignment.cluster_of[i]);
        if (it == map.majority.end()) {
            throw ParamError("cluster " + std::to_string(assignment.cluster_of[i]) +
                             " has no majority label");
        }
        if (it->second == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::string pair_key(const LabelPair& pair) {
    return {label_letter(pair.first), label_letter(pair.second)};
}

double run_pseudo_accuracy(const EmbeddingDataset& fit_data, const PipelineConfig& config,
                           const EmbeddingDataset* eval_data) {
    Matrix x = fit_data.to_matrix();
    if (config.normalize) x = l2_normalize_rows(x);
    const auto dims = clamp_components(config.pca_dims, fit_data.size(), fit_data.dim());
    const PCAModel pca = fit_pca(x, dims);
    const auto fit = fit_kmeans(transform(pca, x), config.kmeans);
    const auto profiles = cluster_profiles(fit.assignment, fit_data.labels(), fit.model.k(),
                                           LabelDistribution::uniform());
    const auto map = majority_labels(profiles.profiles);
    if (eval_data == nullptr) return pseudo_accuracy(map, fit.assignment, fit_data.labels());

    Matrix ex = eval_data->to_matrix();
    if (config.normalize) ex = l2_normalize_rows(ex);
    return pseudo_accuracy(map, assign(fit.model, transform(pca, ex)), eval_data->labels());
}

double pairwise_pseudo_accuracy(const EmbeddingDataset& dataset, const LabelPair& pair,
                                const PipelineConfig& config, const EmbeddingDataset* eval_data) {
    const std::array<Label, 2> keep = {pair.first, pair.second};
    const auto subset = dataset.filter_labels(keep);
    if (subset.size() < config.kmeans.k) {
        throw ParamError("pair " + pair_key(pair) + " has " + std::to_string(subset.size()) +
                         " examples, fewer than k=" + std::to_string(config.kmeans.k));
    }
    if (eval_data == nullptr) return run_pseudo_accuracy(subset, config);
    const auto eval_subset = eval_data->filter_labels(keep);
    return run_pseudo_accuracy(subset, config, &eval_subset);
}

}  // namespace peco
