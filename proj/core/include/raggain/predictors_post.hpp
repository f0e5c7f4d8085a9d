#pragma once

/// \file predictors_post.hpp
/// Post-retrieval predictors. The score-distribution family (WIG, NQC, SMV
/// and their unregularized variants) reads the top-k scores of one ranked
/// list; REF compares the list with a reference ranking through RBO.
///
/// All of them truncate k to the list length instead of failing.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "raggain/ranked_list.hpp"

namespace raggain {

/// Guard for predictors that divide by the corpus score.
inline constexpr double kCorpusScoreEpsilon = 1e-12;

enum class RboMode { truncated, extrapolated };

std::string_view to_string(RboMode mode);
std::optional<RboMode> parse_rbo_mode(std::string_view text);

struct PostParams {
    std::size_t k = 10;
    double p = 0.9;
    std::size_t depth = 100;
    RboMode rbo_mode = RboMode::extrapolated;
};

/// Regularized: mean of the top-k scores minus the corpus score.
/// Unregularized (U_WIG): the mean alone.
double wig(const RankedList& list, double corpus_score, std::size_t k, bool regularized);

/// Population standard deviation of the top-k scores, divided by the corpus
/// score when normalized (NQC) and raw otherwise (QC).
double nqc(const RankedList& list, double corpus_score, std::size_t k, bool normalized);

/// (1/k) sum s_i |ln(s_i / mu)| over the top-k scores, mu their mean; divided
/// by the corpus score when normalized. Every top-k score must be positive.
double smv(const RankedList& list, double corpus_score, std::size_t k, bool normalized);

/// The six score-distribution predictors by name.
enum class ScorePredictor { wig, u_wig, nqc, qc, smv, u_smv };

std::string_view to_string(ScorePredictor predictor);
std::optional<ScorePredictor> parse_score_predictor(std::string_view name);
bool uses_corpus_score(ScorePredictor predictor);
double score_predict(ScorePredictor predictor, const RankedList& list, double corpus_score,
                     std::size_t k);

/// Rank-biased overlap of two rankings of distinct ids.
///
/// truncated:    (1-p) sum_{d=1..D} p^(d-1) A_d,   A_d = |a[:d] & b[:d]| / d
/// extrapolated: truncated + A_D p^D
///
/// D is `depth`, clamped to the longer list so identical short lists still
/// agree perfectly. Two empty lists give 0.
double rbo(std::span<const std::string> a, std::span<const std::string> b, double p,
           std::size_t depth, RboMode mode);
double rbo(const RankedList& a, const RankedList& b, double p, std::size_t depth, RboMode mode);

/// REF: agreement between the retrieved list and an externally reranked reference.
double ref_predict(const RankedList& original, const RankedList& reference, const PostParams& params);

}  // namespace raggain
