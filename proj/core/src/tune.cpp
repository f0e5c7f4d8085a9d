#include "raggain/tune.hpp"

#include <fstream>
#include <set>

#include "raggain/error.hpp"
#include "raggain/pipeline.hpp"
#include "raggain/predictors_post.hpp"
#include "raggain/predictors_gen.hpp"
#include "raggain/stats.hpp"
#include "text_util.hpp"

namespace raggain {

namespace {

std::string format_grid_value(double v) { return format_value(v); }

std::optional<double> aligned_pearson(const Column& predicted, const Column& gains) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [qid, g] : gains) {
        const auto it = predicted.find(qid);
        if (it == predicted.end()) continue;
        xs.push_back(it->second);
        ys.push_back(g);
    }
    try {
        return pearson(xs, ys);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::string GridPoint::label() const {
    std::string out;
    for (const auto& [k, v] : settings) {
        if (!out.empty()) out.push_back(' ');
        out += k + "=" + v;
    }
    return out;
}

std::vector<GridPoint> default_grid(const std::string& predictor) {
    std::vector<GridPoint> grid;
    if (parse_score_predictor(predictor)) {
        for (const auto k : kScoreCutoffGrid) grid.push_back({{{"k", std::to_string(k)}}});
    } else if (predictor == "ref") {
        for (const auto depth : kRboDepthGrid)
            for (const auto p : kRboDecayGrid)
                grid.push_back({{{"rbo_depth", std::to_string(depth)}, {"rbo_p", format_grid_value(p)}}});
    } else if (predictor == "uncertainty") {
        for (const auto s : all_pool_strategies()) grid.push_back({{{"pool", std::string(to_string(s))}}});
    }
    return grid;
}

std::vector<GridPoint> parse_grid(std::string_view text) {
    std::vector<GridPoint> grid{GridPoint{}};
    std::set<std::string> keys;
    for (const auto part : detail::split(text, ';')) {
        const auto item = detail::trim(part);
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw Error("grid: expected 'key=v1,v2' in '" + std::string(item) + "'");
        const auto key = std::string(detail::trim(item.substr(0, eq)));
        if (key.empty() || !keys.insert(key).second) throw Error("grid: empty or repeated key '" + key + "'");
        std::vector<std::string> values;
        for (const auto v : detail::split(item.substr(eq + 1), ',')) {
            const auto t = detail::trim(v);
            if (t.empty()) throw Error("grid: empty value for key '" + key + "'");
            values.emplace_back(t);
        }
        std::vector<GridPoint> next;
        for (const auto& point : grid) {
            for (const auto& v : values) {
                auto extended = point;
                extended.settings.emplace_back(key, v);
                next.push_back(std::move(extended));
            }
        }
        grid = std::move(next);
    }
    if (keys.empty()) throw Error("grid: no keys in '" + std::string(text) + "'");
    return grid;
}

TuneOutcome tune(std::span<const GridPoint> grid, const std::function<Column(const GridPoint&)>& predict,
                 const std::vector<NamedColumn>& gains) {
    if (grid.empty()) throw Error("tune: empty grid");
    if (gains.size() < 2) throw Error("tune: need validation gains for at least 2 quality metrics");

    TuneOutcome outcome;
    for (const auto& g : gains) outcome.metrics.push_back(g.name);

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto column = predict(grid[i]);
        std::vector<std::optional<double>> row;
        std::optional<double> total = 0.0;
        for (const auto& g : gains) {
            row.push_back(aligned_pearson(column, g.values));
            if (row.back() && total) *total += *row.back();
            else total.reset();
        }
        outcome.r.push_back(std::move(row));
        outcome.totals.push_back(total);
        if (total && (!best || *total > *outcome.totals[*best])) best = i;
    }
    if (!best) throw Error("tune: no grid point yields defined correlations");
    outcome.best = *best;
    return outcome;
}

TuneOutcome tune_predictor(const std::string& predictor, std::span<const GridPoint> grid,
                           const ExperimentData& data) {
    std::vector<NamedColumn> gains;
    for (auto& [metric, g] : compute_gain_columns(data)) gains.push_back({metric, std::move(g.table.values)});

    const auto predict = [&](const GridPoint& point) {
        auto settings = data.config();
        settings.k_overrides.erase(predictor);
        for (const auto& [key, value] : point.settings) apply_setting(settings, key, value, {});
        return compute_predictor(predictor, data, settings).column.values;
    };
    return tune(grid, predict, gains);
}

std::vector<std::string> chosen_settings(const std::string& predictor, const GridPoint& point) {
    std::vector<std::string> lines;
    for (const auto& [key, value] : point.settings) {
        const bool per_predictor = key == "k" && parse_score_predictor(predictor).has_value();
        lines.push_back((per_predictor ? "k." + predictor : key) + " = " + value);
    }
    return lines;
}

void write_tune_table(const std::filesystem::path& path, std::span<const GridPoint> grid,
                      const TuneOutcome& outcome) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write tune table " + path.string());
    out << "point\tsettings";
    for (const auto& m : outcome.metrics) out << "\tr_" << m;
    out << "\ttotal\tchosen\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << i << '\t' << grid[i].label();
        for (const auto& r : outcome.r[i]) out << '\t' << (r ? format_value(*r) : "nan");
        out << '\t' << (outcome.totals[i] ? format_value(*outcome.totals[i]) : "nan") << '\t'
            << (i == outcome.best ? 1 : 0) << '\n';
    }
}

}  // namespace raggain
