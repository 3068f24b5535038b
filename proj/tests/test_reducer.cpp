#include "doctest.h"

#include "oracles.hpp"
#include "peco/error.hpp"
#include "peco/reducer.hpp"

#include <random>

using namespace peco;

namespace {

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng) * (1.0 + static_cast<double>(j));
    }
    return m;
}

oracle::Rows to_rows(const Matrix& m) {
    oracle::Rows r(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        r[static_cast<std::size_t>(i)].assign(m.row(i).data(), m.row(i).data() + m.cols());
    }
    return r;
}

void check_orthonormal(const Matrix& c) {
    const Matrix g = c * c.transpose();
    for (Eigen::Index a = 0; a < g.rows(); ++a) {
        for (Eigen::Index b = 0; b < g.cols(); ++b) {
            CHECK(std::abs(g(a, b) - (a == b ? 1.0 : 0.0)) <= 1e-6);
        }
    }
}

double reconstruction_error(const Matrix& x, const PCAModel& m) {
    const Matrix z = transform(m, x);
    const Matrix back = (z * m.components).rowwise() + m.mean.transpose();
    return (back - x).squaredNorm();
}

}  // namespace

TEST_CASE("points on y = x give the diagonal axis") {
    Matrix x(4, 2);
    x << 1, 1, 2, 2, 3, 3, -1, -1;
    const auto one = fit_pca(x, 1);
    CHECK(one.components(0, 0) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(one.components(0, 1) == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(one.explained_variance[0] > 0.0);
    // Three points and two dims: the orthogonal direction carries no variance.
    Matrix x3(3, 2);
    x3 << 1, 1, 2, 2, -1, -1;
    const auto full = fit_pca(x3, 2);
    CHECK(full.explained_variance[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    check_orthonormal(full.components);
}

TEST_CASE("identical rows give zero variance and orthonormal axes") {
    Matrix x = Matrix::Constant(5, 3, 2.5);
    const auto m = fit_pca(x, 3);
    for (double v : m.explained_variance) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    check_orthonormal(m.components);
}

TEST_CASE("fit_pca matches the Jacobi covariance oracle on random 8x5 data") {
    std::mt19937_64 rng(3);
    const Matrix x = random_matrix(rng, 8, 5);
    const auto model = fit_pca(x, 3);
    const auto ref = oracle::jacobi(oracle::covariance(to_rows(x)));
    for (std::size_t k = 0; k < 3; ++k) {
        double dot = 0.0;
        for (std::size_t j = 0; j < 5; ++j) {
            dot += model.components(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) *
                   ref.vectors[k][j];
        }
        CHECK(std::abs(dot) > 1.0 - 1e-6);
        CHECK(model.explained_variance[k] == doctest::Approx(ref.values[k]).epsilon(1e-9));
    }
}

TEST_CASE("Gram route (n < D) agrees with the oracle") {
    std::mt19937_64 rng(11);
    const Matrix x = random_matrix(rng, 5, 9);
    const auto model = fit_pca(x, 4);
    check_orthonormal(model.components);
    const auto ref = oracle::jacobi(oracle::covariance(to_rows(x)));
    for (std::size_t k = 0; k < 4; ++k) {
        double dot = 0.0;
        for (std::size_t j = 0; j < 9; ++j) {
            dot += model.components(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) *
                   ref.vectors[k][j];
        }
        CHECK(std::abs(dot) > 1.0 - 1e-6);
        CHECK(model.explained_variance[k] == doctest::Approx(ref.values[k]).epsilon(1e-9));
    }
}

TEST_CASE("sign canonicalization: largest-magnitude entry positive") {
    std::mt19937_64 rng(21);
    const auto m = fit_pca(random_matrix(rng, 12, 6), 4);
    for (Eigen::Index k = 0; k < m.components.rows(); ++k) {
        Eigen::Index arg = 0;
        m.components.row(k).cwiseAbs().maxCoeff(&arg);
        CHECK(m.components(k, arg) > 0.0);
    }
}

TEST_CASE("transform") {
    std::mt19937_64 rng(8);
    const Matrix x = random_matrix(rng, 10, 4);
    const auto m = fit_pca(x, 3);

    const Matrix at_mean = transform(m, m.mean.transpose());
    CHECK(at_mean.norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    // Column variance of the projection equals the explained variance.
    const Matrix z = transform(m, x);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        const double mean = z.col(j).mean();
        const double var = (z.col(j).array() - mean).square().sum() / (z.rows() - 1);
        CHECK(std::abs(var - m.explained_variance[static_cast<std::size_t>(j)]) <= 1e-6);
    }

    // Full rank: pairwise distances preserved.
    const auto full = fit_pca(x, 4);
    const Matrix zf = transform(full, x);
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
        for (Eigen::Index b = a + 1; b < x.rows(); ++b) {
            CHECK((zf.row(a) - zf.row(b)).norm() == doctest::Approx((x.row(a) - x.row(b)).norm()));
        }
    }

    CHECK_THROWS_AS(transform(m, Matrix::Zero(2, 5)), ParamError);
}

TEST_CASE("reconstruction error non-increasing and trace bound") {
    std::mt19937_64 rng(14);
    const Matrix x = random_matrix(rng, 15, 5);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c <= 3; ++c) {
        const double err = reconstruction_error(x, fit_pca(x, c));
        CHECK(err <= prev + 1e-9);
        prev = err;
    }
    const auto m = fit_pca(x, 5);
    double explained = 0.0;
    for (double v : m.explained_variance) explained += v;
    const Matrix centered = x.rowwise() - x.colwise().mean();
    const double total = centered.squaredNorm() / (x.rows() - 1);
    CHECK(explained <= total + 1e-6);
    CHECK(explained == doctest::Approx(total));
}

TEST_CASE("row permutation does not change the model") {
    std::mt19937_64 rng(4);
    const Matrix x = random_matrix(rng, 9, 4);
    Matrix shuffled = x;
    std::vector<Eigen::Index> perm = {4, 1, 8, 0, 3, 7, 2, 6, 5};
    for (Eigen::Index i = 0; i < 9; ++i) shuffled.row(i) = x.row(perm[static_cast<std::size_t>(i)]);
    const auto a = fit_pca(x, 3);
    const auto b = fit_pca(shuffled, 3);
    CHECK((a.components - b.components).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit_pca preconditions") {
    CHECK_THROWS_AS(fit_pca(Matrix::Zero(1, 3), 1), InsufficientData);
    CHECK_THROWS_AS(fit_pca(Matrix::Zero(4, 3), 0), ParamError);
    CHECK_THROWS_AS(fit_pca(Matrix::Zero(4, 3), 4), ParamError);
    CHECK_THROWS_AS(fit_pca(Matrix::Zero(3, 5), 3), ParamError);
    CHECK(clamp_components(30, 10, 32) == 9);
    CHECK(clamp_components(30, 1000, 8) == 8);
    CHECK(clamp_components(3, 1000, 8) == 3);
}

TEST_CASE("PCA model JSON round trip") {
    std::mt19937_64 rng(2);
    const auto m = fit_pca(random_matrix(rng, 6, 3), 2);
    const auto back = pca_from_json(to_json(m));
    CHECK((back.components - m.components).norm() == 0.0);
    CHECK(back.explained_variance == m.explained_variance);
}
