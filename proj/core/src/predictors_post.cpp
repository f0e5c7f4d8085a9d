#include "raggain/predictors_post.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

#include "raggain/error.hpp"

namespace raggain {

namespace {

constexpr std::array<std::string_view, 6> kScorePredictorNames{"wig", "u_wig", "nqc",
                                                               "qc",  "smv",   "u_smv"};

std::size_t cutoff(const RankedList& list, std::size_t k, std::string_view who) {
    if (list.empty())
        throw Error(std::string(who) + ": empty ranked list for qid '" + list.qid + "'");
    if (k == 0) throw Error(std::string(who) + ": k must be at least 1");
    return std::min(k, list.size());
}

double top_mean(const RankedList& list, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += list.entries[i].score;
    return sum / static_cast<double>(n);
}

double normalize_by_corpus(double value, double corpus_score, std::string_view who,
                           const std::string& qid) {
    if (std::abs(corpus_score) <= kCorpusScoreEpsilon)
        throw Error(std::string(who) + ": corpus score too close to zero for qid '" + qid + "'");
    return value / corpus_score;
}

}  // namespace

std::string_view to_string(RboMode mode) {
    return mode == RboMode::truncated ? "truncated" : "extrapolated";
}

std::optional<RboMode> parse_rbo_mode(std::string_view text) {
    if (text == "truncated") return RboMode::truncated;
    if (text == "extrapolated") return RboMode::extrapolated;
    return std::nullopt;
}

double wig(const RankedList& list, double corpus_score, std::size_t k, bool regularized) {
    const auto n = cutoff(list, k, "wig");
    const double mean = top_mean(list, n);
    return regularized ? mean - corpus_score : mean;
}

double nqc(const RankedList& list, double corpus_score, std::size_t k, bool normalized) {
    const auto n = cutoff(list, k, "nqc");
    const double mean = top_mean(list, n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = list.entries[i].score - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    return normalized ? normalize_by_corpus(sd, corpus_score, "nqc", list.qid) : sd;
}

double smv(const RankedList& list, double corpus_score, std::size_t k, bool normalized) {
    const auto n = cutoff(list, k, "smv");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(list.entries[i].score > 0.0)) {
            throw Error("smv: non-positive score at rank " + std::to_string(i + 1) + " (doc '" +
                        list.entries[i].doc_id + "') for qid '" + list.qid + "'");
        }
    }
    const double mean = top_mean(list, n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = list.entries[i].score;
        sum += s * std::abs(std::log(s / mean));
    }
    const double value = sum / static_cast<double>(n);
    return normalized ? normalize_by_corpus(value, corpus_score, "smv", list.qid) : value;
}

std::string_view to_string(ScorePredictor predictor) {
    return kScorePredictorNames[static_cast<std::size_t>(predictor)];
}

std::optional<ScorePredictor> parse_score_predictor(std::string_view name) {
    for (std::size_t i = 0; i < kScorePredictorNames.size(); ++i) {
        if (kScorePredictorNames[i] == name) return static_cast<ScorePredictor>(i);
    }
    return std::nullopt;
}

bool uses_corpus_score(ScorePredictor predictor) {
    return predictor == ScorePredictor::wig || predictor == ScorePredictor::nqc ||
           predictor == ScorePredictor::smv;
}

double score_predict(ScorePredictor predictor, const RankedList& list, double corpus_score,
                     std::size_t k) {
    switch (predictor) {
        case ScorePredictor::wig: return wig(list, corpus_score, k, true);
        case ScorePredictor::u_wig: return wig(list, corpus_score, k, false);
        case ScorePredictor::nqc: return nqc(list, corpus_score, k, true);
        case ScorePredictor::qc: return nqc(list, corpus_score, k, false);
        case ScorePredictor::smv: return smv(list, corpus_score, k, true);
        case ScorePredictor::u_smv: return smv(list, corpus_score, k, false);
    }
    throw Error("unknown score predictor");
}

namespace {

// Id accessors keep the two public overloads free of copies.
template <typename IdA, typename IdB>
double rbo_impl(std::size_t size_a, std::size_t size_b, IdA id_a, IdB id_b, double p,
                std::size_t depth, RboMode mode) {
    if (!(p > 0.0 && p < 1.0)) throw Error("rbo: decay p must lie in (0, 1)");
    if (depth == 0) throw Error("rbo: depth must be at least 1");

    const std::size_t effective = std::min(depth, std::max(size_a, size_b));
    if (effective == 0) return 0.0;

    std::unordered_set<std::string_view> seen_a;
    std::unordered_set<std::string_view> seen_b;
    seen_a.reserve(effective);
    seen_b.reserve(effective);

    std::size_t overlap = 0;
    double weight = 1.0;  // p^(d-1)
    double sum = 0.0;
    double agreement = 0.0;
    for (std::size_t d = 1; d <= effective; ++d) {
        const bool has_a = d <= size_a;
        const bool has_b = d <= size_b;
        const std::string_view x = has_a ? id_a(d - 1) : std::string_view{};
        const std::string_view y = has_b ? id_b(d - 1) : std::string_view{};
        if (has_a && has_b && x == y) {
            ++overlap;
        } else {
            if (has_a && seen_b.contains(x)) ++overlap;
            if (has_b && seen_a.contains(y)) ++overlap;
        }
        if (has_a && !seen_a.insert(x).second)
            throw Error("rbo: duplicate id '" + std::string(x) + "' in first ranking");
        if (has_b && !seen_b.insert(y).second)
            throw Error("rbo: duplicate id '" + std::string(y) + "' in second ranking");

        agreement = static_cast<double>(overlap) / static_cast<double>(d);
        sum += weight * agreement;
        weight *= p;
    }
    double value = (1.0 - p) * sum;
    if (mode == RboMode::extrapolated) value += agreement * weight;
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double rbo(std::span<const std::string> a, std::span<const std::string> b, double p,
           std::size_t depth, RboMode mode) {
    return rbo_impl(
        a.size(), b.size(), [&](std::size_t i) -> std::string_view { return a[i]; },
        [&](std::size_t i) -> std::string_view { return b[i]; }, p, depth, mode);
}

double rbo(const RankedList& a, const RankedList& b, double p, std::size_t depth, RboMode mode) {
    return rbo_impl(
        a.size(), b.size(), [&](std::size_t i) -> std::string_view { return a.entries[i].doc_id; },
        [&](std::size_t i) -> std::string_view { return b.entries[i].doc_id; }, p, depth, mode);
}

double ref_predict(const RankedList& original, const RankedList& reference, const PostParams& params) {
    if (original.qid != reference.qid) {
        throw Error("ref: qid mismatch between original '" + original.qid + "' and reference '" +
                    reference.qid + "'");
    }
    return rbo(original, reference, params.p, params.depth, params.rbo_mode);
}

}  // namespace raggain
