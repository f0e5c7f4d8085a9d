#include "raggain/predictors_pre.hpp"

#include <algorithm>
#include <vector>

#include "raggain/error.hpp"

namespace raggain {

namespace {

constexpr std::array<std::string_view, 3> kStatisticNames{"idf", "scq", "var"};
constexpr std::array<std::string_view, 3> kAggregateNames{"mean", "max", "min"};

double statistic_of(const TermStats& stats, PreStatistic statistic) {
    switch (statistic) {
        case PreStatistic::idf: return stats.idf;
        case PreStatistic::scq: return stats.scq;
        case PreStatistic::var: return stats.var;
    }
    return 0.0;
}

}  // namespace

std::string PreFamily::name() const {
    return std::string(kStatisticNames[static_cast<std::size_t>(statistic)]) + "_" +
           std::string(kAggregateNames[static_cast<std::size_t>(aggregate)]);
}

std::optional<PreFamily> PreFamily::parse(std::string_view name) {
    for (const auto& family : all_pre_families()) {
        if (family.name() == name) return family;
    }
    return std::nullopt;
}

const std::array<PreFamily, 9>& all_pre_families() {
    static const std::array<PreFamily, 9> families = [] {
        std::array<PreFamily, 9> out{};
        std::size_t i = 0;
        for (auto s : {PreStatistic::idf, PreStatistic::scq, PreStatistic::var})
            for (auto a : {Aggregate::mean, Aggregate::max, Aggregate::min}) out[i++] = {s, a};
        return out;
    }();
    return families;
}

double pre_predict(std::span<const std::string> query, const Index& index, const PreFamily& family) {
    if (query.empty()) throw Error("pre-retrieval predictor: empty query");

    std::vector<double> values;
    values.reserve(query.size());
    for (const auto& term : query) values.push_back(statistic_of(term_stats(index, term), family.statistic));
    // Sorted summation makes the mean exactly invariant to term order.
    std::sort(values.begin(), values.end());

    switch (family.aggregate) {
        case Aggregate::mean: {
            double sum = 0.0;
            for (const double v : values) sum += v;
            return std::clamp(sum / static_cast<double>(values.size()), values.front(), values.back());
        }
        case Aggregate::max: return values.back();
        case Aggregate::min: return values.front();
    }
    return 0.0;
}

}  // namespace raggain
