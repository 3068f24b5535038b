#include "peco/cli.hpp"

#include "peco/embedding_io.hpp"
#include "peco/error.hpp"
#include "peco/pipeline.hpp"
#include "peco/synthgen.hpp"

#include "CLI11.hpp"

#include <ostream>

namespace peco {

namespace {

void add_pipeline_flags(CLI::App& cmd, RunConfig& cfg, std::string& metric,
                        std::string& reference) {
    cmd.add_option("--input", cfg.inputs, "embedding file (.bin PECOEMB1, .csv, .jsonl)")
        ->required();
    cmd.add_option("--k", cfg.k, "number of clusters")->capture_default_str();
    cmd.add_option("--pca", cfg.pca_dims, "PCA components")->capture_default_str();
    cmd.add_option("--metric", metric, "euclidean|cosine")->capture_default_str();
    cmd.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    cmd.add_option("--max-iter", cfg.max_iter, "k-means iteration cap")->capture_default_str();
    cmd.add_option("--tol", cfg.tol, "k-means relative centroid-shift tolerance")
        ->capture_default_str();
    cmd.add_option("--reference", reference, "empirical|uniform")->capture_default_str();
    cmd.add_option("--grid", cfg.grid_step, "PECO threshold grid step")->capture_default_str();
    cmd.add_flag("--weighted", cfg.weighted, "weight clusters by size in the PECO curve");
    cmd.add_flag("--normalize", cfg.normalize, "L2-normalize embeddings before PCA");
    cmd.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cluster-based hypothesis bias audit (PECO curves)", "peco"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string metric = "euclidean";
    std::string reference = "empirical";
    std::string tsne_input = "pca";
    std::string holdout;

    auto* analyze_cmd = app.add_subcommand("analyze", "bias report for one dataset");
    add_pipeline_flags(*analyze_cmd, cfg, metric, reference);
    analyze_cmd->add_option("--threshold", cfg.threshold, "bias-map marking threshold")
        ->capture_default_str();
    analyze_cmd->add_flag("--tsne", cfg.tsne, "emit tsne.csv and tsne.svg");
    analyze_cmd->add_option("--tsne-input", tsne_input, "pca|raw")->capture_default_str();
    analyze_cmd->add_option("--perplexity", cfg.tsne_perplexity, "t-SNE perplexity")
        ->capture_default_str();
    analyze_cmd->add_option("--tsne-iters", cfg.tsne_iterations, "t-SNE iterations")
        ->capture_default_str();
    analyze_cmd->add_option("--holdout", holdout,
                            "evaluation split for pseudoclassification (fit on --input)");

    auto* compare_cmd = app.add_subcommand("compare", "PECO overlay across datasets");
    add_pipeline_flags(*compare_cmd, cfg, metric, reference);

    SynthConfig synth;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic PECOEMB1 dataset");
    synth_cmd->add_option("--n", synth.n)->capture_default_str();
    synth_cmd->add_option("--dim", synth.dim)->capture_default_str();
    synth_cmd->add_option("--centers", synth.n_true_clusters)->capture_default_str();
    synth_cmd->add_option("--beta", synth.beta, "bias strength in [0,1]")->capture_default_str();
    synth_cmd->add_option("--sigma", synth.sigma)->capture_default_str();
    synth_cmd->add_option("--center-scale", synth.center_scale)->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
    synth_cmd->add_option("--out", synth_out, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth_cmd) {
            const auto ds = generate(synth);
            const auto bytes = save_embeddings(ds, synth_out);
            out << synth_out << " (" << bytes << " bytes)\n";
            return 0;
        }
        cfg.metric = parse_metric(metric);
        cfg.reference = parse_reference(reference);
        if (tsne_input == "pca") {
            cfg.tsne_input = TsneInput::Pca;
        } else if (tsne_input == "raw") {
            cfg.tsne_input = TsneInput::Raw;
        } else {
            throw ParamError("unknown --tsne-input '" + tsne_input + "' (pca|raw)");
        }
        if (!holdout.empty()) cfg.holdout = holdout;

        if (*analyze_cmd) {
            out << cmd_analyze(cfg).string() << '\n';
        } else {
            out << cmd_compare(cfg).string() << '\n';
        }
        return 0;
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        err << "InternalError: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace peco
