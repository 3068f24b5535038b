#include "peco/reducer.hpp"

#include "peco/error.hpp"

#include <algorithm>
#include <cmath>

namespace peco {

namespace {

void canonicalize_sign(Eigen::Ref<Vector> v) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        // Strict comparison keeps the first of equal magnitudes.
        if (std::abs(v[j]) > best + 1e-12) {
            best = std::abs(v[j]);
            arg = j;
        }
    }
    if (v[arg] < 0.0) v = -v;
}

// Gram-Schmidt against the already accepted rows; returns false if `v` is
// (numerically) inside their span.
bool orthonormalize_against(const Matrix& basis, Eigen::Index accepted, Vector& v) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index r = 0; r < accepted; ++r) {
            v -= basis.row(r).dot(v) * basis.row(r).transpose();
        }
    }
    const double norm = v.norm();
    if (norm < 1e-8) return false;
    v /= norm;
    return true;
}

}  // namespace

std::size_t clamp_components(std::size_t requested, std::size_t n, std::size_t dim) {
    const std::size_t cap = std::min(n > 0 ? n - 1 : 0, dim);
    return std::max<std::size_t>(1, std::min(requested, cap));
}

PCAModel fit_pca(const Matrix& vectors, std::size_t n_components) {
    const auto n = static_cast<std::size_t>(vectors.rows());
    const auto dim = static_cast<std::size_t>(vectors.cols());
    if (n < 2) throw InsufficientData("PCA needs at least 2 rows, got " + std::to_string(n));
    if (n_components < 1 || n_components > std::min(n - 1, dim)) {
        throw ParamError("n_components must lie in [1, min(n-1, D)] = [1, " +
                         std::to_string(std::min(n - 1, dim)) + "], got " +
                         std::to_string(n_components));
    }

    PCAModel model;
    model.mean = vectors.colwise().mean().transpose();
    const Matrix centered = vectors.rowwise() - model.mean.transpose();
    const double denom = static_cast<double>(n - 1);
    const auto c = static_cast<Eigen::Index>(n_components);

    // Eigen-solve whichever of the D x D covariance or n x n Gram is smaller.
    Matrix axes(c, static_cast<Eigen::Index>(dim));
    std::vector<double> variances(n_components);
    if (dim <= n) {
        const Matrix cov = (centered.transpose() * centered) / denom;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
        if (solver.info() != Eigen::Success) throw NumericalError("covariance eigensolve failed");
        // Eigenvalues come back ascending.
        for (Eigen::Index k = 0; k < c; ++k) {
            const Eigen::Index src = static_cast<Eigen::Index>(dim) - 1 - k;
            axes.row(k) = solver.eigenvectors().col(src).transpose();
            variances[static_cast<std::size_t>(k)] = solver.eigenvalues()[src];
        }
    } else {
        const Matrix gram = (centered * centered.transpose()) / denom;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
        if (solver.info() != Eigen::Success) throw NumericalError("Gram eigensolve failed");
        for (Eigen::Index k = 0; k < c; ++k) {
            const Eigen::Index src = static_cast<Eigen::Index>(n) - 1 - k;
            axes.row(k) = (centered.transpose() * solver.eigenvectors().col(src)).transpose();
            variances[static_cast<std::size_t>(k)] = solver.eigenvalues()[src];
        }
    }

    // Normalize, and replace degenerate (zero-variance) axes by an orthonormal
    // completion drawn from the standard basis.
    model.components.resize(c, static_cast<Eigen::Index>(dim));
    Eigen::Index next_basis = 0;
    for (Eigen::Index k = 0; k < c; ++k) {
        Vector v = axes.row(k).transpose();
        const bool usable = variances[static_cast<std::size_t>(k)] > 0.0 && v.norm() > 1e-12;
        if (usable) v.normalize();
        if (!usable || !orthonormalize_against(model.components, k, v)) {
            do {
                v = Vector::Unit(static_cast<Eigen::Index>(dim), next_basis++);
            } while (!orthonormalize_against(model.components, k, v));
        }
        canonicalize_sign(v);
        model.components.row(k) = v.transpose();
        variances[static_cast<std::size_t>(k)] = std::max(0.0, variances[static_cast<std::size_t>(k)]);
    }
    // Clamping negatives to zero cannot break the ordering except among
    // near-zero values; enforce it exactly.
    for (std::size_t k = 1; k < variances.size(); ++k) {
        variances[k] = std::min(variances[k], variances[k - 1]);
    }
    model.explained_variance = std::move(variances);
    return model;
}

Matrix transform(const PCAModel& model, const Matrix& vectors) {
    if (static_cast<std::size_t>(vectors.cols()) != model.input_dim()) {
        throw ParamError("transform: input has dim " + std::to_string(vectors.cols()) +
                         ", model expects " + std::to_string(model.input_dim()));
    }
    return (vectors.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Matrix l2_normalize_rows(const Matrix& vectors) {
    Matrix out = vectors;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double norm = out.row(i).norm();
        if (norm > 0.0) out.row(i) /= norm;
    }
    return out;
}

nlohmann::json to_json(const PCAModel& model) {
    nlohmann::json j;
    j["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
    auto comps = nlohmann::json::array();
    for (Eigen::Index k = 0; k < model.components.rows(); ++k) {
        const auto row = model.components.row(k);
        comps.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    j["components"] = std::move(comps);
    j["explained_variance"] = model.explained_variance;
    return j;
}

PCAModel pca_from_json(const nlohmann::json& j) {
    PCAModel model;
    try {
        const auto mean = j.at("mean").get<std::vector<double>>();
        const auto comps = j.at("components").get<std::vector<std::vector<double>>>();
        model.explained_variance = j.at("explained_variance").get<std::vector<double>>();
        model.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
        model.components.resize(static_cast<Eigen::Index>(comps.size()),
                                static_cast<Eigen::Index>(mean.size()));
        for (std::size_t k = 0; k < comps.size(); ++k) {
            if (comps[k].size() != mean.size()) throw FormatError("PCA component has wrong length");
            for (std::size_t d = 0; d < mean.size(); ++d) {
                model.components(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d)) =
                    comps[k][d];
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed PCA model JSON: ") + e.what());
    }
    if (model.explained_variance.size() != static_cast<std::size_t>(model.components.rows())) {
        throw FormatError("explained_variance length does not match components");
    }
    return model;
}

}  // namespace peco
