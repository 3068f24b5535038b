#pragma once

#include "peco/dataset.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace peco {

inline constexpr std::size_t kDefaultPcaComponents = 30;

/// Plain PCA: no whitening, no feature scaling. Covariance uses n-1.
struct PCAModel {
    Vector mean;                         // D
    Matrix components;                   // C x D, orthonormal rows
    std::vector<double> explained_variance;  // C, non-increasing

    std::size_t input_dim() const { return static_cast<std::size_t>(mean.size()); }
    std::size_t n_components() const { return static_cast<std::size_t>(components.rows()); }
};

/// Requires n >= 2 (InsufficientData) and 1 <= n_components <= min(n-1, D)
/// (ParamError). Each component's largest-magnitude entry is made positive.
PCAModel fit_pca(const Matrix& vectors, std::size_t n_components);

/// min(requested, n-1, D), at least 1.
std::size_t clamp_components(std::size_t requested, std::size_t n, std::size_t dim);

/// Rows mapped to components * (row - mean). ParamError on dim mismatch.
Matrix transform(const PCAModel& model, const Matrix& vectors);

/// Unit-L2 rows; zero rows are left as they are.
Matrix l2_normalize_rows(const Matrix& vectors);

nlohmann::json to_json(const PCAModel& model);
PCAModel pca_from_json(const nlohmann::json& j);

}  // namespace peco
