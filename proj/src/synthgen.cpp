#include "peco/synthgen.hpp"

#include "peco/error.hpp"
#include "peco/seed.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace peco {

void validate(const SynthConfig& c) {
    if (c.n_true_clusters < 1) throw ParamError("n_true_clusters must be at least 1");
    if (c.n < c.n_true_clusters) throw ParamError("n must be at least n_true_clusters");
    if (c.dim < 1) throw ParamError("dim must be at least 1");
    if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) throw ParamError("sigma must be positive");
    if (!(c.center_scale >= 0.0) || !std::isfinite(c.center_scale)) {
        throw ParamError("center_scale must be non-negative");
    }
    if (!(c.beta >= 0.0 && c.beta <= 1.0)) throw ParamError("beta must lie in [0, 1]");
}

EmbeddingDataset generate(const SynthConfig& c, std::vector<std::int32_t>* true_center) {
    validate(c);
    std::mt19937_64 rng(derive_seed(c.seed, "synth"));
    std::uniform_real_distribution<double> center_coord(-c.center_scale, c.center_scale);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_center(0, c.n_true_clusters - 1);
    std::uniform_int_distribution<std::size_t> pick_label(0, kNumLabels - 1);
    std::normal_distribution<double> noise(0.0, c.sigma);

    std::vector<double> centers(c.n_true_clusters * c.dim);
    for (auto& v : centers) v = center_coord(rng);

    std::vector<Label> labels(c.n);
    std::vector<float> vectors(c.n * c.dim);
    std::vector<std::string> ids(c.n);
    if (true_center != nullptr) true_center->assign(c.n, 0);
    for (std::size_t i = 0; i < c.n; ++i) {
        const std::size_t center = pick_center(rng);
        for (std::size_t j = 0; j < c.dim; ++j) {
            vectors[i * c.dim + j] = static_cast<float>(centers[center * c.dim + j] + noise(rng));
        }
        // Draw both variates unconditionally so the stream layout does not
        // depend on beta.
        const bool preferred = unit(rng) < c.beta;
        const std::size_t uniform_label = pick_label(rng);
        labels[i] = static_cast<Label>(preferred ? center % kNumLabels : uniform_label);
        ids[i] = "synth-" + std::to_string(i);
        if (true_center != nullptr) (*true_center)[i] = static_cast<std::int32_t>(center);
    }
    std::ostringstream name;
    name << "synth-beta-" << c.beta;
    return EmbeddingDataset(std::move(labels), std::move(vectors), c.dim, std::move(ids),
                            name.str(), "synthetic");
}

nlohmann::json to_json(const SynthConfig& c) {
    return {{"n", c.n},         {"dim", c.dim},     {"n_true_clusters", c.n_true_clusters},
            {"beta", c.beta},   {"sigma", c.sigma}, {"center_scale", c.center_scale},
            {"seed", c.seed}};
}

}  // namespace peco
