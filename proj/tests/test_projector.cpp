#include "doctest.h"

#include "oracles.hpp"
#include "peco/error.hpp"
#include "peco/projector.hpp"

#include <cstring>
#include <random>
#include <sstream>

using namespace peco;

namespace {

// Two isotropic blobs 50 sigma apart in `dim` dimensions.
Matrix two_blobs(std::size_t per_blob, Eigen::Index dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix x(static_cast<Eigen::Index>(2 * per_blob), dim);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = g(rng);
        if (static_cast<std::size_t>(i) >= per_blob) x(i, 0) += 50.0;
    }
    return x;
}

bool blobs_separable(const Matrix& y, std::size_t per_blob) {
    std::vector<std::pair<double, double>> pts;
    std::vector<int> side;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        pts.emplace_back(y(i, 0), y(i, 1));
        side.push_back(static_cast<std::size_t>(i) >= per_blob ? 1 : 0);
    }
    return oracle::linearly_separable(pts, side);
}

}  // namespace

TEST_CASE("conditional affinities hit the requested perplexity") {
    const Matrix x = two_blobs(20, 3, 1);
    Matrix d(40, 40);
    for (Eigen::Index i = 0; i < 40; ++i) {
        for (Eigen::Index j = 0; j < 40; ++j) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
    }
    const Matrix p = conditional_affinities(d, 5.0);
    for (Eigen::Index i = 0; i < 40; ++i) {
        CHECK(p.row(i).sum() == doctest::Approx(1.0));
        CHECK(p(i, i) == 0.0);
        double h = 0.0;
        for (Eigen::Index j = 0; j < 40; ++j) {
            if (p(i, j) > 0) h -= p(i, j) * std::log(p(i, j));
        }
        CHECK(std::exp(h) == doctest::Approx(5.0).epsilon(1e-3));
    }
}

TEST_CASE("exact t-SNE separates far blobs, is deterministic, and finite") {
    const Matrix x = two_blobs(60, 10, 2);
    TsneOptions o;
    o.perplexity = 15.0;
    o.track_kl = true;
    const auto a = tsne(x, o);
    const auto b = tsne(x, o);
    REQUIRE(a.embedding.rows() == 120);
    REQUIRE(a.embedding.cols() == 2);
    CHECK(!a.barnes_hut);
    CHECK(a.embedding.allFinite());
    CHECK(std::memcmp(a.embedding.data(), b.embedding.data(), sizeof(double) * 240) == 0);
    CHECK(blobs_separable(a.embedding, 60));

    REQUIRE(a.kl_history.size() == o.iterations);
    for (std::size_t i = o.iterations - 50; i < o.iterations; ++i) {
        CHECK(a.kl_history[i] <= a.kl_history[i - 1] + 1e-3);
    }
    CHECK(a.kl_history.back() < a.kl_history[o.exaggeration_iters]);
}

TEST_CASE("Barnes-Hut path separates blobs and is deterministic") {
    const Matrix x = two_blobs(150, 6, 3);
    TsneOptions o;
    o.exact_max_n = 100;
    o.iterations = 500;
    const auto a = tsne(x, o);
    const auto b = tsne(x, o);
    CHECK(a.barnes_hut);
    CHECK(a.embedding.allFinite());
    CHECK(std::memcmp(a.embedding.data(), b.embedding.data(), sizeof(double) * 600) == 0);
    CHECK(blobs_separable(a.embedding, 150));
}

TEST_CASE("t-SNE preconditions") {
    CHECK_THROWS_AS(tsne(Matrix::Random(3, 2), {}), ParamError);
    TsneOptions o;
    o.perplexity = 30.0;
    CHECK_THROWS_AS(tsne(Matrix::Random(50, 2), o), ParamError);  // (50-1)/3 < 30
    o.perplexity = 0.5;
    CHECK_THROWS_AS(tsne(Matrix::Random(50, 2), o), ParamError);
}

TEST_CASE("make_points marks d >= threshold as high bias") {
    ClusterBiasProfile low, high, edge;
    low.cluster_id = 0;
    low.d = 0.1;
    high.cluster_id = 1;
    high.d = 0.3;
    edge.cluster_id = 2;
    edge.d = 0.25;
    const std::vector<ClusterBiasProfile> ps = {low, high, edge};
    Matrix y(3, 2);
    y << 0, 0, 1, 1, 2, 2;
    const auto pts = make_points(y, std::vector<Label>{Label::Entailment, Label::Neutral, Label::Contradiction},
                                 Assignment{{0, 1, 2}}, ps, 0.25);
    CHECK(!pts[0].high_bias);
    CHECK(pts[1].high_bias);
    CHECK(pts[2].high_bias);
}

TEST_CASE("emit_plot formats") {
    std::ostringstream empty_csv;
    emit_plot({}, empty_csv, PlotFormat::Csv, 0.25);
    CHECK(empty_csv.str() == "x,y,label,cluster_id,high_bias\n");
    std::ostringstream empty_svg;
    emit_plot({}, empty_svg, PlotFormat::Svg, 0.25);
    CHECK(empty_svg.str().find("<svg") != std::string::npos);
    CHECK(empty_svg.str().find("<circle") == std::string::npos);

    const std::vector<ProjectedPoint> pts = {{0.5, -1.0, Label::Entailment, 3, false},
                                             {2.0, 4.0, Label::Contradiction, 1, true},
                                             {1.0, 1.0, Label::Neutral, 2, false}};
    std::ostringstream csv;
    const auto n = emit_plot(pts, csv, PlotFormat::Csv, 0.25);
    const auto text = csv.str();
    CHECK(n == text.size());
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find("2,4,2,1,1\n") != std::string::npos);

    std::ostringstream svg;
    emit_plot(pts, svg, PlotFormat::Svg, 0.25);
    const auto s = svg.str();
    auto occurrences = [&](const std::string& needle) {
        std::size_t count = 0;
        for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++count;
        return count;
    };
    CHECK(occurrences("<circle") == 2);
    CHECK(occurrences("<path") == 1);  // the X glyph
    CHECK(s.find("stroke=\"#d62728\"") != std::string::npos);
    CHECK(s.find("fill=\"#2ca02c\"") != std::string::npos);
    CHECK(s.find("fill=\"#000000\"") != std::string::npos);
}
