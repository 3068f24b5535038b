#include "peco/pipeline.hpp"

#include "peco/embedding_io.hpp"
#include "peco/error.hpp"
#include "peco/seed.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace peco {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

Matrix prepared(const EmbeddingDataset& ds, bool normalize) {
    Matrix x = ds.to_matrix();
    return normalize ? l2_normalize_rows(x) : x;
}

}  // namespace

std::string_view reference_name(ReferenceMode m) {
    return m == ReferenceMode::Empirical ? "empirical" : "uniform";
}

ReferenceMode parse_reference(std::string_view text) {
    if (text == "empirical") return ReferenceMode::Empirical;
    if (text == "uniform") return ReferenceMode::Uniform;
    throw ParamError("unknown reference '" + std::string(text) + "' (empirical|uniform)");
}

PipelineConfig RunConfig::pipeline() const {
    PipelineConfig p;
    p.pca_dims = pca_dims;
    p.normalize = normalize;
    p.kmeans.k = k;
    p.kmeans.metric = metric;
    p.kmeans.seed = derive_seed(seed, "kmeans");
    p.kmeans.max_iter = max_iter;
    p.kmeans.tol = tol;
    return p;
}

TsneOptions RunConfig::tsne_options() const {
    TsneOptions o;
    o.perplexity = tsne_perplexity;
    o.iterations = tsne_iterations;
    o.seed = seed;
    return o;
}

nlohmann::json to_json(const RunConfig& c) {
    std::vector<std::string> inputs;
    for (const auto& p : c.inputs) inputs.push_back(p.string());
    return {
        {"inputs", inputs},
        {"k", c.k},
        {"pca", c.pca_dims},
        {"metric", metric_name(c.metric)},
        {"seed", c.seed},
        {"max_iter", c.max_iter},
        {"tol", c.tol},
        {"reference", reference_name(c.reference)},
        {"grid", c.grid_step},
        {"threshold", c.threshold},
        {"weighted", c.weighted},
        {"normalize", c.normalize},
        {"tsne", c.tsne},
        {"tsne_input", c.tsne_input == TsneInput::Pca ? "pca" : "raw"},
        {"tsne_perplexity", c.tsne_perplexity},
        {"tsne_iterations", c.tsne_iterations},
        {"holdout", c.holdout ? nlohmann::json(c.holdout->string()) : nlohmann::json(nullptr)},
        {"out", c.out_dir.string()},
    };
}

AnalysisResult analyze(const EmbeddingDataset& dataset, const RunConfig& config,
                       const EmbeddingDataset* holdout) {
    AnalysisResult r;
    r.dataset = dataset.name();
    r.split = dataset.split();
    r.n = dataset.size();
    r.dim = dataset.dim();
    const PipelineConfig pipe = config.pipeline();

    if (holdout != nullptr && holdout->dim() != dataset.dim()) {
        throw ParamError("holdout split has dim " + std::to_string(holdout->dim()) +
                         ", expected " + std::to_string(dataset.dim()));
    }

    const Matrix x = prepared(dataset, config.normalize);
    const auto dims = clamp_components(config.pca_dims, dataset.size(), dataset.dim());
    if (dims != config.pca_dims && dataset.size() >= 2) {
        r.warnings.push_back("pca dims clamped from " + std::to_string(config.pca_dims) + " to " +
                             std::to_string(dims) + " (min(n-1, D))");
    }
    r.pca = fit_pca(x, dims);
    const Matrix reduced = transform(r.pca, x);
    r.clustering = fit_kmeans(reduced, pipe.kmeans);
    if (!r.clustering.model.converged) {
        r.warnings.push_back("k-means stopped at max_iter=" + std::to_string(config.max_iter) +
                             " before reaching tol");
    }

    r.reference_mode = config.reference;
    r.reference = config.reference == ReferenceMode::Uniform
                      ? LabelDistribution::uniform()
                      : normalize(label_histogram(dataset.labels()));
    r.profiles = cluster_profiles(r.clustering.assignment, dataset.labels(),
                                  r.clustering.model.k(), r.reference);
    for (auto id : r.profiles.empty_clusters) {
        r.warnings.push_back("cluster " + std::to_string(id) + " is empty (k too large for n?)");
    }
    r.curve = peco_curve(r.profiles.profiles, config.grid_step, config.weighted);

    if (config.pseudo) {
        PseudoReport pr;
        pr.holdout = holdout != nullptr;
        const auto map = majority_labels(r.profiles.profiles);
        if (holdout == nullptr) {
            pr.three_way = pseudo_accuracy(map, r.clustering.assignment, dataset.labels());
        } else {
            const Matrix hx = transform(r.pca, prepared(*holdout, config.normalize));
            pr.three_way = pseudo_accuracy(map, assign(r.clustering.model, hx), holdout->labels());
        }
        double sum = 0.0;
        std::size_t have = 0;
        for (const auto& pair : kLabelPairs) {
            const auto key = pair_key(pair);
            try {
                const double acc = pairwise_pseudo_accuracy(dataset, pair, pipe, holdout);
                pr.pairs[key] = acc;
                sum += acc;
                ++have;
            } catch (const ParamError& e) {
                pr.pairs[key] = std::nullopt;
                r.warnings.push_back("pair " + key + " skipped: " + e.what());
            }
        }
        if (have == kLabelPairs.size()) pr.pairwise_mean = sum / static_cast<double>(have);
        r.pseudo = pr;
    }

    if (config.tsne) {
        const Matrix& input = config.tsne_input == TsneInput::Pca ? reduced : x;
        const auto result = tsne(input, config.tsne_options());
        r.points = make_points(result.embedding, dataset.labels(), r.clustering.assignment,
                               r.profiles.profiles, config.threshold);
    }
    return r;
}

nlohmann::json to_json(const AnalysisResult& r, const RunConfig& config) {
    using nlohmann::json;
    const double d_max = max_distance(r.reference);
    auto profiles = json::array();
    for (const auto& p : r.profiles.profiles) profiles.push_back(to_json(p, d_max));

    json report = {
        {"format_version", kReportFormatVersion},
        {"dataset", r.dataset},
        {"split", r.split},
        {"n", r.n},
        {"dim", r.dim},
        {"k", r.clustering.model.k()},
        {"metric", metric_name(r.clustering.model.metric)},
        {"reference", {{"mode", reference_name(r.reference_mode)},
                       {"distribution", r.reference.probs()},
                       {"d_max", d_max}}},
        {"config", to_json(config)},
        {"pca", {{"n_components", r.pca.n_components()},
                 {"explained_variance", r.pca.explained_variance}}},
        {"clustering", {{"seed", r.clustering.model.seed},
                        {"inertia", r.clustering.model.inertia},
                        {"iterations_run", r.clustering.model.iterations_run},
                        {"converged", r.clustering.model.converged}}},
        {"profiles", std::move(profiles)},
        {"empty_clusters", r.profiles.empty_clusters},
        {"peco", to_json(r.curve)},
        {"warnings", r.warnings},
    };
    if (r.pseudo) {
        json pairs = json::object();
        for (const auto& [key, value] : r.pseudo->pairs) {
            pairs[key] = value ? json(*value) : json(nullptr);
        }
        report["pseudoclassification"] = {
            {"mode", r.pseudo->holdout ? "holdout" : "train"},
            {"three_way", r.pseudo->three_way},
            {"pairs", pairs},
            {"pairwise_mean",
             r.pseudo->pairwise_mean ? json(*r.pseudo->pairwise_mean) : json(nullptr)},
            {"baseline", {{"three_way", 1.0 / 3.0}, {"pair", 0.5}}},
        };
    }
    return report;
}

std::filesystem::path cmd_analyze(const RunConfig& config) {
    if (config.inputs.size() != 1) throw ParamError("analyze takes exactly one --input");
    const EmbeddingDataset dataset = load_dataset(config.inputs.front());
    std::optional<EmbeddingDataset> holdout;
    if (config.holdout) holdout = load_dataset(*config.holdout);

    const AnalysisResult result = analyze(dataset, config, holdout ? &*holdout : nullptr);
    ensure_dir(config.out_dir);
    const auto report_path = config.out_dir / "report.json";
    write_text(report_path, to_json(result, config).dump(2) + "\n");
    write_text(config.out_dir / "pca_model.json", to_json(result.pca).dump() + "\n");
    write_text(config.out_dir / "cluster_model.json",
               to_json(result.clustering.model).dump() + "\n");
    if (config.tsne) {
        for (auto [name, fmt] : {std::pair{"tsne.csv", PlotFormat::Csv},
                                 std::pair{"tsne.svg", PlotFormat::Svg}}) {
            std::ofstream out(config.out_dir / name, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError(std::string("cannot open ") + name + " for writing");
            emit_plot(result.points, out, fmt, config.threshold);
        }
    }
    return report_path;
}

std::vector<ComparisonEntry> compare(const RunConfig& config) {
    if (config.inputs.size() < 2) {
        throw ParamError("compare needs at least two --input datasets");
    }
    RunConfig per = config;
    per.pseudo = false;
    per.tsne = false;
    per.holdout.reset();

    std::vector<std::future<ComparisonEntry>> jobs;
    for (const auto& path : config.inputs) {
        jobs.push_back(std::async(std::launch::async, [&per, path] {
            const auto ds = load_dataset(path);
            auto r = analyze(ds, per);
            return ComparisonEntry{ds.name(), path, std::move(r.curve), std::move(r.warnings)};
        }));
    }
    std::vector<ComparisonEntry> entries;
    for (auto& j : jobs) entries.push_back(j.get());

    // Disambiguate repeated stems so overlay columns stay distinct.
    std::map<std::string, int> seen;
    for (auto& e : entries) {
        const int count = ++seen[e.name];
        if (count > 1) e.name += "#" + std::to_string(count);
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.curve.auc > b.curve.auc; });
    return entries;
}

std::filesystem::path cmd_compare(const RunConfig& config) {
    const auto entries = compare(config);
    ensure_dir(config.out_dir);
    using nlohmann::json;
    auto table = json::array();
    for (std::size_t rank = 0; rank < entries.size(); ++rank) {
        const auto& e = entries[rank];
        table.push_back({{"rank", rank + 1},
                         {"dataset", e.name},
                         {"path", e.path.string()},
                         {"auc", e.curve.auc},
                         {"k", e.curve.k},
                         {"outlier_counts", e.curve.outlier_counts},
                         {"warnings", e.warnings}});
    }
    const json report = {{"format_version", kReportFormatVersion},
                         {"config", to_json(config)},
                         {"thresholds", entries.front().curve.thresholds},
                         {"datasets", table}};
    const auto path = config.out_dir / "compare.json";
    write_text(path, report.dump(2) + "\n");

    std::ostringstream csv;
    csv << std::setprecision(10) << "threshold";
    for (const auto& e : entries) csv << ',' << e.name;
    csv << '\n';
    const auto& grid = entries.front().curve.thresholds;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        csv << grid[i];
        for (const auto& e : entries) csv << ',' << e.curve.outlier_fraction[i];
        csv << '\n';
    }
    write_text(config.out_dir / "peco_overlay.csv", csv.str());
    return path;
}

}  // namespace peco
