#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace peco {

/// Row-major dense matrix used for all analysis arithmetic.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Label : std::uint8_t { Entailment = 0, Neutral = 1, Contradiction = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::Entailment, Label::Neutral, Label::Contradiction};

constexpr std::size_t code(Label l) { return static_cast<std::size_t>(l); }

/// Throws LabelCodeError for codes above 2.
Label label_from_code(std::uint64_t c);

/// Accepts "entailment"/"neutral"/"contradiction" in any case, or "0"/"1"/"2".
Label parse_label(std::string_view text);

std::string_view label_name(Label l);

/// One-letter tag used in pair keys: e, n, c.
char label_letter(Label l);

using LabelCounts = std::array<std::int64_t, kNumLabels>;

/// Probability vector over the three labels. Construction validates the
/// simplex invariant (non-negative, sums to 1 within 1e-9).
class LabelDistribution {
public:
    explicit LabelDistribution(std::array<double, kNumLabels> probs);

    static LabelDistribution uniform();

    double operator[](std::size_t c) const { return probs_[c]; }
    double operator[](Label l) const { return probs_[code(l)]; }
    const std::array<double, kNumLabels>& probs() const { return probs_; }

    /// Euclidean distance between the two probability vectors.
    double l2_distance(const LabelDistribution& other) const;

    bool operator==(const LabelDistribution&) const = default;

private:
    std::array<double, kNumLabels> probs_;
};

LabelCounts label_histogram(std::span<const Label> labels);

/// Throws EmptyCluster when every count is zero.
LabelDistribution normalize(const LabelCounts& counts);

/// Labeled embeddings. Vectors are kept as 32-bit floats, exactly as stored in
/// files; analysis code widens them through to_matrix().
class EmbeddingDataset {
public:
    EmbeddingDataset() = default;

    /// Validates: labels.size() * dim == vectors.size(), dim >= 1, all entries
    /// finite, ids (when present) one per row.
    EmbeddingDataset(std::vector<Label> labels, std::vector<float> vectors, std::size_t dim,
                     std::optional<std::vector<std::string>> ids = std::nullopt,
                     std::string name = {}, std::string split = {});

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<Label>& labels() const { return labels_; }
    const std::vector<float>& vectors() const { return vectors_; }
    const std::optional<std::vector<std::string>>& ids() const { return ids_; }
    const std::string& name() const { return name_; }
    const std::string& split() const { return split_; }

    std::span<const float> row(std::size_t i) const {
        return {vectors_.data() + i * dim_, dim_};
    }

    void set_name(std::string name) { name_ = std::move(name); }
    void set_split(std::string split) { split_ = std::move(split); }

    Matrix to_matrix() const;

    /// Rows whose label is in `keep`, in original order.
    EmbeddingDataset filter_labels(std::span<const Label> keep) const;

    /// Compares the stored content (ids, labels, dim, float bit patterns).
    /// name and split are descriptive metadata and are not compared.
    bool same_content(const EmbeddingDataset& other) const;

private:
    std::vector<Label> labels_;
    std::vector<float> vectors_;
    std::size_t dim_ = 1;
    std::optional<std::vector<std::string>> ids_;
    std::string name_;
    std::string split_;
};

}  // namespace peco
