#pragma once

#include "peco/dataset.hpp"

#include "json.hpp"

#include <cstdint>

namespace peco {

/// Gaussian blobs whose labels are mixed (1-beta)*uniform + beta*point-mass on
/// a per-center preferred label. Preferred labels go round-robin over centers
/// (center j prefers label j mod 3), so the global distribution stays uniform
/// in expectation while individual centers are skewed.
struct SynthConfig {
    std::size_t n = 9000;
    std::size_t dim = 32;
    std::size_t n_true_clusters = 30;
    double beta = 0.5;
    double sigma = 1.0;
    double center_scale = 50.0;
    std::uint64_t seed = 42;
};

/// ParamError unless n >= n_true_clusters >= 1, dim >= 1, sigma > 0,
/// 0 <= beta <= 1.
void validate(const SynthConfig& config);

/// Deterministic in `config.seed`. ids are "synth-<i>"; `true_center`, when
/// non-null, receives the generating center of each row.
EmbeddingDataset generate(const SynthConfig& config, std::vector<std::int32_t>* true_center = nullptr);

nlohmann::json to_json(const SynthConfig& config);

}  // namespace peco
