#pragma once

#include "peco/bias_metrics.hpp"
#include "peco/clusterer.hpp"
#include "peco/dataset.hpp"
#include "peco/projector.hpp"
#include "peco/pseudoclassifier.hpp"
#include "peco/reducer.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace peco {

inline constexpr int kReportFormatVersion = 1;

enum class ReferenceMode { Empirical, Uniform };
enum class TsneInput { Pca, Raw };

std::string_view reference_name(ReferenceMode m);
ReferenceMode parse_reference(std::string_view text);

struct RunConfig {
    std::vector<std::filesystem::path> inputs;
    std::size_t k = kDefaultClusters;
    std::size_t pca_dims = kDefaultPcaComponents;
    Metric metric = Metric::Euclidean;
    std::uint64_t seed = 42;
    std::size_t max_iter = 300;
    double tol = 1e-6;
    ReferenceMode reference = ReferenceMode::Empirical;
    double grid_step = kDefaultGridStep;
    double threshold = kDefaultMarkThreshold;
    bool weighted = false;
    bool normalize = false;
    bool pseudo = true;  // pseudoclassification section
    bool tsne = false;
    TsneInput tsne_input = TsneInput::Pca;
    double tsne_perplexity = 30.0;
    std::size_t tsne_iterations = 1000;
    std::optional<std::filesystem::path> holdout;
    std::filesystem::path out_dir = "peco-out";

    /// Derived per-module options; randomness flows from `seed` through
    /// named sub-streams.
    PipelineConfig pipeline() const;
    TsneOptions tsne_options() const;
};

nlohmann::json to_json(const RunConfig& config);

struct PseudoReport {
    double three_way = 0.0;
    std::map<std::string, std::optional<double>> pairs;  // "ne", "nc", "ec"
    std::optional<double> pairwise_mean;
    bool holdout = false;
};

struct AnalysisResult {
    std::string dataset;
    std::string split;
    std::size_t n = 0;
    std::size_t dim = 0;
    PCAModel pca;
    KMeansResult clustering;
    ReferenceMode reference_mode = ReferenceMode::Empirical;
    LabelDistribution reference = LabelDistribution::uniform();
    ProfileSet profiles;
    PECOCurve curve;
    std::optional<PseudoReport> pseudo;
    std::vector<ProjectedPoint> points;  // filled when t-SNE ran
    std::vector<std::string> warnings;
};

/// reduce -> cluster -> profile -> PECO, plus pseudoclassification and the
/// optional t-SNE map. `holdout` (when set) is the split scored by the
/// pseudoclassifier against clusters fitted on `dataset`.
AnalysisResult analyze(const EmbeddingDataset& dataset, const RunConfig& config,
                       const EmbeddingDataset* holdout = nullptr);

nlohmann::json to_json(const AnalysisResult& result, const RunConfig& config);

/// Writes report.json (+ pca_model.json, cluster_model.json, tsne.csv/svg)
/// into config.out_dir and returns the report path.
std::filesystem::path cmd_analyze(const RunConfig& config);

struct ComparisonEntry {
    std::string name;
    std::filesystem::path path;
    PECOCurve curve;
    std::vector<std::string> warnings;
};

/// Analyzes every input concurrently on a shared threshold grid. Entries come
/// back sorted by AUC, highest first. ParamError with fewer than two inputs.
std::vector<ComparisonEntry> compare(const RunConfig& config);

/// Writes compare.json and peco_overlay.csv; returns the compare.json path.
std::filesystem::path cmd_compare(const RunConfig& config);

}  // namespace peco
