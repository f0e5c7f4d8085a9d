#pragma once

/// \file pipeline.hpp
/// Experiment orchestration: loads inputs once, derives gain labels per
/// quality metric, computes predictor columns, and evaluates them.
///
/// Output directory layout written by run_experiment():
///
///     run.trec                      BM25 run (only when retrieved here)
///     quality/<metric>.<mode>.tsv   quality scores used for the gain
///     gain/<metric>.tsv             gain labels (`qid<TAB>gain`)
///     gain/<metric>.hist.tsv        histogram
///     gain/<metric>.summary.tsv     mean, sign fractions, clamped count
///     predictors/<name>.tsv         one ScoreTable per predictor
///     report.tsv, report.txt        correlation report
///
/// All files are qid-sorted and free of timestamps, so identical inputs and
/// seed give byte-identical outputs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "raggain/config.hpp"
#include "raggain/eval.hpp"
#include "raggain/gain.hpp"
#include "raggain/index.hpp"
#include "raggain/io.hpp"

namespace raggain {

/// Loaded, validated inputs plus per-query caches shared by all predictors.
/// Read-only after construction.
class ExperimentData {
public:
    explicit ExperimentData(const ExperimentConfig& config);

    const ExperimentConfig& config() const noexcept { return config_; }
    const std::vector<QuestionRecord>& queries() const noexcept { return queries_; }
    const std::set<std::string>& qids() const noexcept { return qids_; }
    const Index* index() const noexcept { return index_ ? &*index_ : nullptr; }
    const RunCollection* run() const noexcept { return run_ ? &*run_ : nullptr; }
    const RunCollection* reference_run() const noexcept { return reference_ ? &*reference_ : nullptr; }
    const GenerationLog* generations() const noexcept { return generations_ ? &*generations_ : nullptr; }
    /// True when the run was produced by BM25 here rather than read from a file.
    bool retrieved_here() const noexcept { return retrieved_here_; }

    const std::vector<std::string>& query_tokens(const std::string& qid) const;
    /// Empty when there is no index or the query has no tokens.
    std::optional<double> corpus_score(const std::string& qid) const;

private:
    ExperimentConfig config_;
    std::vector<QuestionRecord> queries_;
    std::set<std::string> qids_;
    std::optional<Index> index_;
    std::optional<RunCollection> run_;
    std::optional<RunCollection> reference_;
    std::optional<GenerationLog> generations_;
    bool retrieved_here_ = false;
    std::map<std::string, std::vector<std::string>> tokens_;
    std::map<std::string, double> corpus_scores_;
};

/// Runs BM25 for every query with a non-empty token sequence.
RunCollection retrieve_all(const Index& index, const std::vector<QuestionRecord>& queries,
                           std::size_t depth, const Bm25Params& params);

struct MetricQuality {
    Column rag;
    Column norag;
};

/// Quality columns per configured metric: injected tables when configured,
/// Q_EM from the generation log otherwise.
std::map<std::string, MetricQuality> compute_quality(const ExperimentData& data);

/// Gain labels per metric, in config order.
std::vector<std::pair<std::string, GainColumn>> compute_gain_columns(const ExperimentData& data);

struct PredictorColumn {
    NamedColumn column;
    std::size_t skipped = 0;       ///< questions the predictor could not score
    std::string first_skip_reason;
};

/// Computes one built-in or external predictor over all queries, using the
/// hyper-parameters in `settings` (normally data.config()).
PredictorColumn compute_predictor(const std::string& name, const ExperimentData& data,
                                  const ExperimentConfig& settings);

/// Predictor names in report order: built-ins as listed, then externals.
std::vector<std::string> configured_predictors(const ExperimentConfig& config);

/// Configured groups, or the defaults (`unsupervised`: pre- and
/// post-retrieval score predictors; `all`: every configured predictor).
std::vector<BaselineGroup> baseline_groups(const ExperimentConfig& config);

struct ExperimentResult {
    CorrelationReport report;
    std::map<std::string, GainDistribution> distributions;
};

struct GainStageResult {
    std::vector<std::pair<std::string, GainColumn>> gains;  ///< config metric order
    std::map<std::string, GainDistribution> distributions;
};

/// Gain stage only: writes quality/ and gain/ outputs.
GainStageResult run_gain_stage(const ExperimentData& data);
/// Predictor stage only: writes predictors/.
std::vector<PredictorColumn> run_predict_stage(const ExperimentData& data);

/// Full experiment. Errors are rethrown prefixed with the failing stage.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SplitSizes {
    std::size_t test = 0;                ///< questions held out for testing
    double validation_fraction = 0.2;    ///< of the remainder
};

struct QuestionSplit {
    std::vector<QuestionRecord> train;
    std::vector<QuestionRecord> validation;
    std::vector<QuestionRecord> test;
};

/// Seeded shuffle, then test / validation / train. Each part keeps input order.
QuestionSplit split_questions(const std::vector<QuestionRecord>& questions, const SplitSizes& sizes,
                              std::uint64_t seed);

}  // namespace raggain
