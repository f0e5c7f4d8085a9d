#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raggain/score_table.hpp"

namespace raggain {

inline constexpr double kDefaultGainEpsilon = 1e-6;

/// Lowercase, drop ASCII punctuation, collapse whitespace, drop one leading
/// article (a / an / the).
std::string normalize_answer(std::string_view text);

/// Exact-match quality: 1 when some normalized reference equals or is
/// contained in the normalized answer. References that normalize to the
/// empty string never match. Throws when `references` is empty.
int q_em(std::string_view generated, std::span<const std::string> references);

/// ln(max(q_rag, eps) / max(q_norag, eps)), evaluated as a difference of logs.
double gain(double q_rag, double q_norag, double eps = kDefaultGainEpsilon);

struct GainColumn {
    ScoreTable table;          ///< value_name "gain"
    std::size_t clamped = 0;   ///< questions with at least one quality below eps
};

/// Gain for every qid present in both quality columns. Qualities must lie in
/// [0, 1]; qid sets must match exactly.
GainColumn compute_gains(const Column& q_rag, const Column& q_norag, double eps = kDefaultGainEpsilon);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

struct GainDistribution {
    std::vector<HistogramBin> bins;
    std::size_t n = 0;
    double mean = 0.0;
    double fraction_negative = 0.0;
    double fraction_zero = 0.0;
    double fraction_positive = 0.0;
};

/// Equal-width bins over [min, max]; the maximum lands in the last bin and a
/// constant input fills bin 0.
GainDistribution gain_distribution(std::span<const double> gains, std::size_t bins);

/// `lower<TAB>upper<TAB>count` rows.
void write_histogram(const std::filesystem::path& path, const GainDistribution& dist);
/// `key<TAB>value` summary rows (n, mean, fractions, clamped count).
void write_distribution_summary(const std::filesystem::path& path, const GainDistribution& dist,
                                std::size_t clamped);

}  // namespace raggain
