#pragma once

#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raggain/score_table.hpp"

namespace raggain {

enum class GenerationMode { rag, norag };

std::string_view to_string(GenerationMode mode);
std::optional<GenerationMode> parse_generation_mode(std::string_view text);

/// One generated answer with the entropy of the next-token distribution at
/// every emitted token (natural log, computed by the generation harness).
struct GenerationRecord {
    std::string qid;
    GenerationMode mode = GenerationMode::rag;
    std::string answer;
    std::vector<double> token_entropies;
};

enum class PoolStrategy { mean, geometric_mean, harmonic_mean, min, max };

std::string_view to_string(PoolStrategy strategy);
std::optional<PoolStrategy> parse_pool_strategy(std::string_view text);
const std::array<PoolStrategy, 5>& all_pool_strategies();

/// Sequence-level uncertainty. Geometric and harmonic means need strictly
/// positive entries.
double pool_entropy(std::span<const double> entropies, PoolStrategy strategy);

/// pool(no-RAG entropies) - pool(RAG entropies): positive when retrieval
/// made the model more certain.
double uncertainty_gap(const GenerationRecord& norag, const GenerationRecord& rag,
                       PoolStrategy strategy = PoolStrategy::max);

/// Turns an externally produced ScoreTable into a predictor column over
/// exactly `expected_qids`. Missing qids are all listed in the error; table
/// rows for unexpected qids are ignored. (Duplicates and non-finite values
/// are already rejected by the ScoreTable parser.)
Column adapt_external_scores(const ScoreTable& table, const std::set<std::string>& expected_qids);

}  // namespace raggain
