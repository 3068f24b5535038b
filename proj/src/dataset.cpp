#include "peco/dataset.hpp"

#include "peco/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>

namespace peco {

Label label_from_code(std::uint64_t c) {
    if (c >= kNumLabels) {
        throw LabelCodeError("label code " + std::to_string(c) + " is not one of 0/1/2");
    }
    return static_cast<Label>(c);
}

Label parse_label(std::string_view text) {
    std::string lower;
    lower.reserve(text.size());
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (lower == "entailment" || lower == "0") return Label::Entailment;
    if (lower == "neutral" || lower == "1") return Label::Neutral;
    if (lower == "contradiction" || lower == "2") return Label::Contradiction;
    throw LabelCodeError("unknown label '" + std::string(text) + "'");
}

std::string_view label_name(Label l) {
    switch (l) {
        case Label::Entailment: return "entailment";
        case Label::Neutral: return "neutral";
        case Label::Contradiction: return "contradiction";
    }
    return "?";
}

char label_letter(Label l) {
    switch (l) {
        case Label::Entailment: return 'e';
        case Label::Neutral: return 'n';
        case Label::Contradiction: return 'c';
    }
    return '?';
}

LabelDistribution::LabelDistribution(std::array<double, kNumLabels> probs) : probs_(probs) {
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValueError("label probability outside [0,1]");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValueError("label probabilities do not sum to 1");
    }
}

LabelDistribution LabelDistribution::uniform() {
    return LabelDistribution({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
}

double LabelDistribution::l2_distance(const LabelDistribution& other) const {
    double acc = 0.0;
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        const double diff = probs_[c] - other.probs_[c];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

LabelCounts label_histogram(std::span<const Label> labels) {
    LabelCounts counts{};
    for (Label l : labels) ++counts[code(l)];
    return counts;
}

LabelDistribution normalize(const LabelCounts& counts) {
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (total <= 0) throw EmptyCluster("cannot normalize an empty label histogram");
    std::array<double, kNumLabels> probs{};
    for (std::size_t c = 0; c < kNumLabels; ++c) {
        probs[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
    }
    return LabelDistribution(probs);
}

EmbeddingDataset::EmbeddingDataset(std::vector<Label> labels, std::vector<float> vectors,
                                   std::size_t dim, std::optional<std::vector<std::string>> ids,
                                   std::string name, std::string split)
    : labels_(std::move(labels)),
      vectors_(std::move(vectors)),
      dim_(dim),
      ids_(std::move(ids)),
      name_(std::move(name)),
      split_(std::move(split)) {
    if (dim_ < 1) throw FormatError("embedding dimension must be at least 1");
    if (vectors_.size() != labels_.size() * dim_) {
        throw FormatError("vector storage does not match labels x dim");
    }
    if (ids_ && ids_->size() != labels_.size()) {
        throw FormatError("id count does not match row count");
    }
    for (Label l : labels_) {
        if (code(l) >= kNumLabels) throw LabelCodeError("label code out of range");
    }
    if (!std::all_of(vectors_.begin(), vectors_.end(), [](float v) { return std::isfinite(v); })) {
        throw ValueError("embedding contains a non-finite value");
    }
}

Matrix EmbeddingDataset::to_matrix() const {
    Matrix m(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                static_cast<double>(vectors_[i * dim_ + j]);
        }
    }
    return m;
}

EmbeddingDataset EmbeddingDataset::filter_labels(std::span<const Label> keep) const {
    std::vector<Label> labels;
    std::vector<float> vectors;
    std::optional<std::vector<std::string>> ids;
    if (ids_) ids.emplace();
    for (std::size_t i = 0; i < size(); ++i) {
        if (std::find(keep.begin(), keep.end(), labels_[i]) == keep.end()) continue;
        labels.push_back(labels_[i]);
        auto r = row(i);
        vectors.insert(vectors.end(), r.begin(), r.end());
        if (ids_) ids->push_back((*ids_)[i]);
    }
    return EmbeddingDataset(std::move(labels), std::move(vectors), dim_, std::move(ids), name_,
                            split_);
}

bool EmbeddingDataset::same_content(const EmbeddingDataset& other) const {
    if (dim_ != other.dim_ || labels_ != other.labels_ || ids_ != other.ids_) return false;
    if (vectors_.size() != other.vectors_.size()) return false;
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        if (std::bit_cast<std::uint32_t>(vectors_[i]) !=
            std::bit_cast<std::uint32_t>(other.vectors_[i])) {
            return false;
        }
    }
    return true;
}

}  // namespace peco
