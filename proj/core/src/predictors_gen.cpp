#include "raggain/predictors_gen.hpp"

#include <algorithm>
#include <cmath>

#include "raggain/error.hpp"

namespace raggain {

namespace {

constexpr std::array<std::string_view, 5> kPoolNames{"mean", "geometric_mean", "harmonic_mean",
                                                     "min", "max"};

}  // namespace

std::string_view to_string(GenerationMode mode) {
    return mode == GenerationMode::rag ? "rag" : "norag";
}

std::optional<GenerationMode> parse_generation_mode(std::string_view text) {
    if (text == "rag") return GenerationMode::rag;
    if (text == "norag") return GenerationMode::norag;
    return std::nullopt;
}

std::string_view to_string(PoolStrategy strategy) {
    return kPoolNames[static_cast<std::size_t>(strategy)];
}

std::optional<PoolStrategy> parse_pool_strategy(std::string_view text) {
    for (std::size_t i = 0; i < kPoolNames.size(); ++i) {
        if (kPoolNames[i] == text) return static_cast<PoolStrategy>(i);
    }
    return std::nullopt;
}

const std::array<PoolStrategy, 5>& all_pool_strategies() {
    static constexpr std::array<PoolStrategy, 5> strategies{
        PoolStrategy::mean, PoolStrategy::geometric_mean, PoolStrategy::harmonic_mean,
        PoolStrategy::min, PoolStrategy::max};
    return strategies;
}

double pool_entropy(std::span<const double> entropies, PoolStrategy strategy) {
    if (entropies.empty()) throw Error("pool_entropy: empty entropy sequence");
    const double n = static_cast<double>(entropies.size());
    const auto [lo, hi] = std::minmax_element(entropies.begin(), entropies.end());

    const auto require_positive = [&] {
        if (!(*lo > 0.0)) {
            throw Error("pool_entropy: " + std::string(to_string(strategy)) +
                        " requires strictly positive entropies");
        }
    };

    double value = 0.0;
    switch (strategy) {
        case PoolStrategy::min: return *lo;
        case PoolStrategy::max: return *hi;
        case PoolStrategy::mean: {
            for (const double h : entropies) value += h;
            value /= n;
            break;
        }
        case PoolStrategy::geometric_mean: {
            require_positive();
            for (const double h : entropies) value += std::log(h);
            value = std::exp(value / n);
            break;
        }
        case PoolStrategy::harmonic_mean: {
            require_positive();
            for (const double h : entropies) value += 1.0 / h;
            value = n / value;
            break;
        }
    }
    // Rounding can push a mean of near-equal values just outside [min, max].
    return std::clamp(value, *lo, *hi);
}

double uncertainty_gap(const GenerationRecord& norag, const GenerationRecord& rag,
                       PoolStrategy strategy) {
    if (norag.qid != rag.qid) {
        throw Error("uncertainty: qid mismatch between no-RAG '" + norag.qid + "' and RAG '" +
                    rag.qid + "'");
    }
    return pool_entropy(norag.token_entropies, strategy) - pool_entropy(rag.token_entropies, strategy);
}

Column adapt_external_scores(const ScoreTable& table, const std::set<std::string>& expected_qids) {
    Column column;
    std::string missing;
    std::size_t n_missing = 0;
    for (const auto& qid : expected_qids) {
        const auto it = table.values.find(qid);
        if (it == table.values.end()) {
            if (n_missing++ > 0) missing += ", ";
            missing += qid;
            continue;
        }
        if (!std::isfinite(it->second)) throw Error("external scores: non-finite value for qid '" + qid + "'");
        column.emplace(qid, it->second);
    }
    if (n_missing > 0) {
        throw Error("external scores '" + table.value_name + "': missing " +
                    std::to_string(n_missing) + " qid(s): " + missing);
    }
    return column;
}

}  // namespace raggain
