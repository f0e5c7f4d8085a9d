#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "raggain/index.hpp"

namespace raggain {

enum class PreStatistic { idf, scq, var };
enum class Aggregate { mean, max, min };

/// One pre-retrieval predictor: a per-term statistic aggregated over the query.
struct PreFamily {
    PreStatistic statistic = PreStatistic::idf;
    Aggregate aggregate = Aggregate::mean;

    /// e.g. "idf_mean", "scq_max", "var_min".
    std::string name() const;
    static std::optional<PreFamily> parse(std::string_view name);

    friend bool operator==(const PreFamily&, const PreFamily&) = default;
};

/// The nine statistic x aggregate combinations, in idf/scq/var, mean/max/min order.
const std::array<PreFamily, 9>& all_pre_families();

/// Aggregates the chosen statistic over the query terms as a multiset;
/// unindexed terms contribute 0. Throws on an empty query.
double pre_predict(std::span<const std::string> query, const Index& index, const PreFamily& family);

}  // namespace raggain
