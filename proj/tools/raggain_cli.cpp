// raggain: label question-answering runs with RAG gain and evaluate gain
// predictors against those labels.
//
//   raggain index    --corpus corpus.jsonl --out dir
//   raggain retrieve --config exp.cfg [--queries q.jsonl --corpus c.jsonl ...]
//   raggain split    --queries q.jsonl --test-size 100 --seed 7 --out dir
//   raggain gain     --config exp.cfg
//   raggain predict  --config exp.cfg
//   raggain evaluate --config exp.cfg
//   raggain report   --out dir
//   raggain tune     --config validation.cfg --predictor wig [--grid "k=1,5,10"]
//
// Every config key may be overridden on the command line as --key value.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "raggain/config.hpp"
#include "raggain/error.hpp"
#include "raggain/eval.hpp"
#include "raggain/index.hpp"
#include "raggain/io.hpp"
#include "raggain/pipeline.hpp"
#include "raggain/tune.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* app, CommonOptions& opts) {
    app->add_option("--config", opts.config, "Experiment config file (key = value lines)");
    app->add_option("--seed", opts.seed, "Random seed");
    app->add_option("--out", opts.out, "Output directory");
    app->allow_extras();
}

raggain::ExperimentConfig resolve_config(const CLI::App* app, const CommonOptions& opts) {
    raggain::ExperimentConfig config;
    if (!opts.config.empty()) config = raggain::load_config(opts.config);
    raggain::apply_overrides(config, app->remaining());
    if (opts.seed) config.seed = *opts.seed;
    if (!opts.out.empty()) config.out = opts.out;
    return config;
}

void ensure_dir(const std::filesystem::path& dir) { std::filesystem::create_directories(dir); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RAG gain labelling and gain-predictor evaluation"};
    app.require_subcommand(1);

    CommonOptions index_opts;
    std::string corpus_path;
    auto* index_cmd = app.add_subcommand("index", "Build a BM25 index from a corpus JSONL file");
    index_cmd->add_option("--corpus", corpus_path, "Corpus JSONL (doc_id, text)")->required();
    index_cmd->add_option("--out", index_opts.out, "Output directory")->default_val("out");

    CommonOptions retrieve_opts;
    auto* retrieve_cmd = app.add_subcommand("retrieve", "Run BM25 for every query and write a TREC run");
    add_common(retrieve_cmd, retrieve_opts);

    CommonOptions split_opts;
    std::string split_queries;
    std::size_t test_size = 0;
    double validation_fraction = 0.2;
    auto* split_cmd = app.add_subcommand("split", "Seeded train / validation / test split of a query file");
    split_cmd->add_option("--queries", split_queries, "Queries JSONL")->required();
    split_cmd->add_option("--test-size", test_size, "Questions held out for testing");
    split_cmd->add_option("--validation-fraction", validation_fraction,
                          "Fraction of the non-test questions used for validation")
        ->default_val(0.2);
    split_cmd->add_option("--seed", split_opts.seed, "Random seed");
    split_cmd->add_option("--out", split_opts.out, "Output directory")->default_val("out");

    CommonOptions gain_opts;
    auto* gain_cmd = app.add_subcommand("gain", "Compute quality scores, gain labels and histograms");
    add_common(gain_cmd, gain_opts);

    CommonOptions predict_opts;
    auto* predict_cmd = app.add_subcommand("predict", "Compute predictor score tables");
    add_common(predict_cmd, predict_opts);

    CommonOptions evaluate_opts;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Run the full experiment and write the report");
    add_common(evaluate_cmd, evaluate_opts);

    CommonOptions report_opts;
    std::string report_path;
    auto* report_cmd = app.add_subcommand("report", "Render a report.tsv as a text table");
    report_cmd->add_option("--report", report_path, "report.tsv to render (default <out>/report.tsv)");
    report_cmd->add_option("--out", report_opts.out, "Experiment output directory")->default_val("out");

    CommonOptions tune_opts;
    std::string tune_predictor;
    std::string tune_grid;
    auto* tune_cmd = app.add_subcommand("tune", "Select hyper-parameters on validation data");
    add_common(tune_cmd, tune_opts);
    tune_cmd->add_option("--predictor", tune_predictor, "Predictor to tune")->required();
    tune_cmd->add_option("--grid", tune_grid, "Grid as 'key=v1,v2;key2=w1,w2' (default: built-in grid)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (index_cmd->parsed()) {
            const auto corpus = raggain::read_corpus(corpus_path);
            const auto index = raggain::build_index(corpus);
            ensure_dir(index_opts.out);
            const auto path = std::filesystem::path(index_opts.out) / "index.json";
            index.save(path);
            std::cout << "indexed " << index.n_docs() << " passages, " << index.total_tokens()
                      << " tokens, " << index.vocabulary_size() << " terms -> " << path.string() << '\n';
        } else if (retrieve_cmd->parsed()) {
            const auto config = resolve_config(retrieve_cmd, retrieve_opts);
            if (config.queries.empty()) throw raggain::Error("retrieve: 'queries' is required");
            raggain::Index index;
            if (!config.index.empty()) index = raggain::Index::load(config.index);
            else if (!config.corpus.empty()) index = raggain::build_index(raggain::read_corpus(config.corpus));
            else throw raggain::Error("retrieve: 'corpus' or 'index' is required");
            const auto queries = raggain::read_queries(config.queries);
            const auto runs = raggain::retrieve_all(index, queries, config.retrieve_depth, config.bm25);
            ensure_dir(config.out);
            const auto path = config.out / "run.trec";
            raggain::write_run_file(path, runs, config.run_tag);
            std::cout << "retrieved " << runs.size() << " queries -> " << path.string() << '\n';
        } else if (split_cmd->parsed()) {
            const auto queries = raggain::read_queries(split_queries);
            const auto split = raggain::split_questions(queries, {test_size, validation_fraction},
                                                        split_opts.seed.value_or(42));
            const std::filesystem::path out = split_opts.out;
            ensure_dir(out);
            raggain::write_queries(out / "train.jsonl", split.train);
            raggain::write_queries(out / "validation.jsonl", split.validation);
            raggain::write_queries(out / "test.jsonl", split.test);
            std::cout << "train " << split.train.size() << ", validation " << split.validation.size()
                      << ", test " << split.test.size() << " -> " << out.string() << '\n';
        } else if (gain_cmd->parsed()) {
            const auto config = resolve_config(gain_cmd, gain_opts);
            const raggain::ExperimentData data(config);
            const auto result = raggain::run_gain_stage(data);
            for (const auto& [metric, dist] : result.distributions) {
                std::cout << metric << ": n=" << dist.n << " mean=" << raggain::format_value(dist.mean)
                          << " negative=" << raggain::format_value(dist.fraction_negative)
                          << " zero=" << raggain::format_value(dist.fraction_zero)
                          << " positive=" << raggain::format_value(dist.fraction_positive) << '\n';
            }
        } else if (predict_cmd->parsed()) {
            const auto config = resolve_config(predict_cmd, predict_opts);
            const raggain::ExperimentData data(config);
            const auto columns = raggain::run_predict_stage(data);
            std::cout << "wrote " << columns.size() << " predictor table(s) to "
                      << (config.out / "predictors").string() << '\n';
        } else if (evaluate_cmd->parsed()) {
            const auto config = resolve_config(evaluate_cmd, evaluate_opts);
            const auto result = raggain::run_experiment(config);
            std::cout << raggain::render_report_text(result.report);
        } else if (report_cmd->parsed()) {
            const auto path = report_path.empty() ? std::filesystem::path(report_opts.out) / "report.tsv"
                                                  : std::filesystem::path(report_path);
            std::cout << raggain::render_report_text(raggain::read_report_tsv(path));
        } else if (tune_cmd->parsed()) {
            const auto config = resolve_config(tune_cmd, tune_opts);
            const raggain::ExperimentData data(config);
            const auto grid = tune_grid.empty() ? raggain::default_grid(tune_predictor)
                                                : raggain::parse_grid(tune_grid);
            if (grid.empty()) {
                throw raggain::Error("tune: predictor '" + tune_predictor +
                                     "' has no hyper-parameters; pass --grid explicitly");
            }
            const auto outcome = raggain::tune_predictor(tune_predictor, grid, data);
            const auto dir = config.out / "tune";
            ensure_dir(dir);
            raggain::write_tune_table(dir / (tune_predictor + ".tsv"), grid, outcome);
            std::cout << "# " << tune_predictor << ": total correlation "
                      << raggain::format_value(*outcome.totals[outcome.best]) << '\n';
            for (const auto& line : raggain::chosen_settings(tune_predictor, grid[outcome.best]))
                std::cout << line << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "raggain: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
