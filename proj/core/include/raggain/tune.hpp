#pragma once

/// \file tune.hpp
/// Hyper-parameter selection on validation data: every grid point is scored
/// by the sum of its Pearson correlations with the gain labels of each
/// quality metric, and the best total wins (earliest point on ties).

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raggain/eval.hpp"

namespace raggain {

class ExperimentData;

/// Cutoffs for the score-distribution predictors.
inline constexpr std::array<std::size_t, 10> kScoreCutoffGrid{1, 2, 3, 4, 5, 10, 20, 30, 40, 50};
/// RBO prefix lengths and decays for REF.
inline constexpr std::array<std::size_t, 12> kRboDepthGrid{1, 5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
inline constexpr std::array<double, 3> kRboDecayGrid{0.9, 0.95, 0.99};
/// Number of top passages used to augment generation (consumed by the
/// generation harness and the supervised predictors).
inline constexpr std::array<std::size_t, 5> kAugmentationDepthGrid{1, 2, 3, 4, 5};

/// One assignment of config keys to values, e.g. {("k", "5")}.
struct GridPoint {
    std::vector<std::pair<std::string, std::string>> settings;

    /// "k=5 rbo_p=0.9"
    std::string label() const;
};

/// The default grid of a built-in predictor (empty for predictors without
/// hyper-parameters).
std::vector<GridPoint> default_grid(const std::string& predictor);

/// Cartesian product of `key=v1,v2;key2=w1,w2`, first key outermost.
std::vector<GridPoint> parse_grid(std::string_view text);

struct TuneOutcome {
    std::size_t best = 0;
    std::vector<std::string> metrics;
    /// r[point][metric]; empty when undefined on that point.
    std::vector<std::vector<std::optional<double>>> r;
    /// Sum over metrics; empty when any correlation is undefined.
    std::vector<std::optional<double>> totals;
};

/// Evaluates `predict` on every grid point against each validation gain
/// column (Pearson over the qids shared by the two columns). Needs at least
/// two gain columns. Throws on an empty grid or when no point has a defined
/// total.
TuneOutcome tune(std::span<const GridPoint> grid,
                 const std::function<Column(const GridPoint&)>& predict,
                 const std::vector<NamedColumn>& gains);

/// tune() for a configured predictor over the experiment's own gain labels.
TuneOutcome tune_predictor(const std::string& predictor, std::span<const GridPoint> grid,
                           const ExperimentData& data);

/// Config line(s) that select the chosen point, e.g. "k.wig = 5".
std::vector<std::string> chosen_settings(const std::string& predictor, const GridPoint& point);

void write_tune_table(const std::filesystem::path& path, std::span<const GridPoint> grid,
                      const TuneOutcome& outcome);

}  // namespace raggain
