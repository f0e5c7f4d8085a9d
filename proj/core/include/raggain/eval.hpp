#pragma once

/// \file eval.hpp
/// Correlation evaluation of gain predictors: Pearson r of every predictor
/// against every metric's gain column, and Williams' test of each predictor
/// against the members of named baseline groups. A predictor earns a
/// group's marker (e.g. "†") for a metric when it beats every comparable
/// member of the group at level alpha.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "raggain/score_table.hpp"

namespace raggain {

inline constexpr double kDefaultAlpha = 0.05;

struct NamedColumn {
    std::string name;
    Column values;
};

struct BaselineGroup {
    std::string name;
    std::string marker;
    std::vector<std::string> members;
};

struct WilliamsComparison {
    std::string metric;
    std::string group;
    std::string predictor;
    std::string baseline;
    double r_predictor = 0.0;
    double r_baseline = 0.0;
    double r_between = 0.0;
    double t = 0.0;  ///< NaN when the triple is degenerate
    double p = 1.0;  ///< NaN when the triple is degenerate
    bool significant = false;  ///< predictor better than baseline with p < alpha
};

struct CorrelationReport {
    std::vector<std::string> predictors;
    std::vector<std::string> metrics;
    /// r[i][j]: predictor i against metric j; empty when undefined (constant column).
    std::vector<std::vector<std::optional<double>>> r;
    std::vector<std::size_t> n;        ///< per metric
    std::vector<std::size_t> dropped;  ///< per metric, questions removed by alignment
    std::vector<BaselineGroup> groups;
    std::vector<WilliamsComparison> comparisons;
    /// flags[i][j][g]: predictor i beats every member of group g on metric j.
    std::vector<std::vector<std::vector<bool>>> flags;
    double alpha = kDefaultAlpha;

    std::optional<double> correlation(const std::string& predictor, const std::string& metric) const;
};

/// Restricts every column to the qids present in all of them. Returns the
/// number of qids removed from the union.
std::size_t align_columns(std::vector<NamedColumn>& predictors, std::vector<NamedColumn>& gains);

/// All columns must share one qid set; otherwise throws listing the
/// symmetric difference. Reductions run in qid order, so results are
/// reproducible bit for bit.
CorrelationReport evaluate(const std::vector<NamedColumn>& predictors,
                           const std::vector<NamedColumn>& gains,
                           const std::vector<BaselineGroup>& groups, double alpha = kDefaultAlpha);

void write_report_tsv(std::ostream& out, const CorrelationReport& report);
void write_report_tsv(const std::filesystem::path& path, const CorrelationReport& report);
CorrelationReport read_report_tsv(const std::filesystem::path& path);
CorrelationReport parse_report_tsv(std::istream& in, const std::string& source);

/// Fixed-width table: predictors down, metrics across, r as ".123" followed
/// by the marker of the last group the predictor beats, then a legend.
std::string render_report_text(const CorrelationReport& report);

}  // namespace raggain
