#pragma once

/// \file config.hpp
/// Experiment configuration.
///
/// Grammar, one setting per line:
///
///     # comment
///     key = value
///
/// Blank lines and `#` comments are ignored; surrounding whitespace is
/// trimmed; a repeated key overrides the earlier value. Relative paths are
/// resolved against the directory of the config file. List values are
/// comma separated. Every key can also be given on the command line as
/// `--key value` or `--key=value`, which takes precedence over the file.
///
/// Keys:
///   corpus, index, queries, run, reference_run, generation_log   input paths
///   out                      output directory
///   seed                     seed of the `random` predictor and of `split`
///   eps, alpha, bins         gain clamp, significance level, histogram bins
///   predictors               built-in predictors to compute
///   quality_metrics          metrics to derive gain labels for
///   quality.<m>.rag / .norag ScoreTable of metric m per mode (em is computed
///                            from the generation log when absent)
///   external.<name>          ScoreTable used as predictor <name>
///   group.<name>             baseline group for Williams tests (markers
///                            †, ††, ... in declaration order)
///   k, k.<predictor>         score-distribution cutoff, global / per predictor
///   rbo_p, rbo_depth, rbo_mode, pool, wig_query_length_norm
///   bm25_k1, bm25_b, retrieve_depth, run_tag

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raggain/index.hpp"
#include "raggain/predictors_gen.hpp"
#include "raggain/predictors_post.hpp"

namespace raggain {

struct QualityPaths {
    std::filesystem::path rag;
    std::filesystem::path norag;
};

struct ExperimentConfig {
    std::filesystem::path corpus;
    std::filesystem::path index;
    std::filesystem::path queries;
    std::filesystem::path run;
    std::filesystem::path reference_run;
    std::filesystem::path generation_log;
    std::filesystem::path out = "out";

    std::uint64_t seed = 42;
    double eps = 1e-6;
    double alpha = 0.05;
    std::size_t bins = 20;

    std::vector<std::string> predictors;
    std::vector<std::string> quality_metrics;
    std::map<std::string, QualityPaths> quality;
    /// Declaration order is report order.
    std::vector<std::pair<std::string, std::filesystem::path>> external;
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;

    std::size_t k = 10;
    std::map<std::string, std::size_t> k_overrides;
    double rbo_p = 0.9;
    std::size_t rbo_depth = 100;
    RboMode rbo_mode = RboMode::extrapolated;
    PoolStrategy pool = PoolStrategy::max;
    bool wig_query_length_norm = false;

    Bm25Params bm25;
    std::size_t retrieve_depth = 100;
    std::string run_tag = "bm25";

    std::size_t k_for(const std::string& predictor) const;
};

/// Applies one `key = value` setting; relative paths resolve against `base_dir`.
/// Throws raggain::Error on unknown keys or invalid values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value,
                   const std::filesystem::path& base_dir);

ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies `--key value` / `--key=value` pairs (paths relative to the cwd).
void apply_overrides(ExperimentConfig& config, const std::vector<std::string>& args);

/// Every selected predictor has its inputs; names are unique and known.
void validate_config(const ExperimentConfig& config);

/// Names of all built-in predictors, in canonical report order.
const std::vector<std::string>& builtin_predictor_names();

}  // namespace raggain
