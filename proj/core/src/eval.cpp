#include "raggain/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "raggain/error.hpp"
#include "raggain/stats.hpp"
#include "text_util.hpp"

namespace raggain {

namespace {

std::vector<double> values_of(const Column& column) {
    std::vector<double> out;
    out.reserve(column.size());
    for (const auto& [_, v] : column) out.push_back(v);
    return out;
}

std::optional<double> try_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    try {
        return pearson(xs, ys);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void check_same_qids(const Column& reference, const std::string& reference_name,
                     const NamedColumn& other) {
    if (reference.size() == other.values.size() &&
        std::equal(reference.begin(), reference.end(), other.values.begin(),
                   [](const auto& a, const auto& b) { return a.first == b.first; })) {
        return;
    }
    std::string diff;
    std::size_t count = 0;
    const auto add = [&](const std::string& qid, const std::string& where) {
        if (count++ > 0) diff += ", ";
        diff += qid + " (only in " + where + ")";
    };
    for (const auto& [qid, _] : reference)
        if (!other.values.contains(qid)) add(qid, reference_name);
    for (const auto& [qid, _] : other.values)
        if (!reference.contains(qid)) add(qid, other.name);
    throw Error("evaluate: qid sets of '" + reference_name + "' and '" + other.name + "' differ in " +
                std::to_string(count) + " qid(s): " + diff);
}

std::string format_r_short(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r);
    std::string s(buf);
    if (s.rfind("0.", 0) == 0) s.erase(0, 1);
    else if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
    if (s == "-.000") s = ".000";
    return s;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_value(*v) : std::string("nan");
}

std::size_t utf8_width(const std::string& s) {
    std::size_t width = 0;
    for (const char c : s)
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++width;
    return width;
}

std::string pad_left(const std::string& s, std::size_t width) {
    const auto w = utf8_width(s);
    return w >= width ? s : std::string(width - w, ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    const auto w = utf8_width(s);
    return w >= width ? s : s + std::string(width - w, ' ');
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out.push_back(sep);
        out += items[i];
    }
    return out;
}

}  // namespace

std::optional<double> CorrelationReport::correlation(const std::string& predictor,
                                                     const std::string& metric) const {
    const auto pi = std::find(predictors.begin(), predictors.end(), predictor);
    const auto mi = std::find(metrics.begin(), metrics.end(), metric);
    if (pi == predictors.end() || mi == metrics.end()) {
        throw Error("report has no entry for predictor '" + predictor + "' and metric '" + metric + "'");
    }
    return r[static_cast<std::size_t>(pi - predictors.begin())][static_cast<std::size_t>(mi - metrics.begin())];
}

std::size_t align_columns(std::vector<NamedColumn>& predictors, std::vector<NamedColumn>& gains) {
    std::set<std::string> all;
    std::optional<std::set<std::string>> common;
    const auto visit = [&](const NamedColumn& column) {
        std::set<std::string> keys;
        for (const auto& [qid, _] : column.values) {
            keys.insert(qid);
            all.insert(qid);
        }
        if (!common) {
            common = std::move(keys);
            return;
        }
        std::set<std::string> kept;
        std::set_intersection(common->begin(), common->end(), keys.begin(), keys.end(),
                              std::inserter(kept, kept.end()));
        common = std::move(kept);
    };
    for (const auto& c : predictors) visit(c);
    for (const auto& c : gains) visit(c);
    if (!common) return 0;

    const auto restrict = [&](NamedColumn& column) {
        std::erase_if(column.values, [&](const auto& kv) { return !common->contains(kv.first); });
    };
    for (auto& c : predictors) restrict(c);
    for (auto& c : gains) restrict(c);
    return all.size() - common->size();
}

CorrelationReport evaluate(const std::vector<NamedColumn>& predictors,
                           const std::vector<NamedColumn>& gains,
                           const std::vector<BaselineGroup>& groups, double alpha) {
    if (gains.empty()) throw Error("evaluate: no gain columns");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("evaluate: alpha must lie in (0, 1)");

    const auto& reference = gains.front();
    for (std::size_t i = 1; i < gains.size(); ++i) check_same_qids(reference.values, reference.name, gains[i]);
    for (const auto& p : predictors) check_same_qids(reference.values, reference.name, p);

    std::set<std::string> names;
    for (const auto& p : predictors) {
        if (!names.insert(p.name).second) throw Error("evaluate: duplicate predictor '" + p.name + "'");
    }
    for (const auto& g : groups) {
        for (const auto& m : g.members) {
            if (!names.contains(m))
                throw Error("evaluate: group '" + g.name + "' names unknown predictor '" + m + "'");
        }
    }

    CorrelationReport report;
    report.alpha = alpha;
    report.groups = groups;
    for (const auto& p : predictors) report.predictors.push_back(p.name);
    for (const auto& g : gains) {
        report.metrics.push_back(g.name);
        report.n.push_back(g.values.size());
        report.dropped.push_back(0);
    }

    std::vector<std::vector<double>> pred_values;
    pred_values.reserve(predictors.size());
    for (const auto& p : predictors) pred_values.push_back(values_of(p.values));

    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < predictors.size(); ++i) index_of[predictors[i].name] = i;

    // Predictor-vs-predictor correlations are metric independent.
    std::vector<std::vector<std::optional<double>>> between(
        predictors.size(), std::vector<std::optional<double>>(predictors.size()));
    const auto between_r = [&](std::size_t a, std::size_t b) {
        auto& cell = between[std::min(a, b)][std::max(a, b)];
        if (!cell) cell = try_pearson(pred_values[a], pred_values[b]);
        return cell;
    };

    report.r.assign(predictors.size(), std::vector<std::optional<double>>(gains.size()));
    report.flags.assign(predictors.size(),
                        std::vector<std::vector<bool>>(gains.size(), std::vector<bool>(groups.size())));

    for (std::size_t m = 0; m < gains.size(); ++m) {
        const auto gain_values = values_of(gains[m].values);
        for (std::size_t i = 0; i < predictors.size(); ++i)
            report.r[i][m] = try_pearson(pred_values[i], gain_values);

        const std::size_t n = gain_values.size();
        for (std::size_t i = 0; i < predictors.size(); ++i) {
            if (!report.r[i][m]) continue;
            for (std::size_t g = 0; g < groups.size(); ++g) {
                bool beats_all = true;
                std::size_t compared = 0;
                for (const auto& member : groups[g].members) {
                    const auto j = index_of.at(member);
                    if (j == i || !report.r[j][m]) continue;

                    WilliamsComparison cmp;
                    cmp.metric = gains[m].name;
                    cmp.group = groups[g].name;
                    cmp.predictor = predictors[i].name;
                    cmp.baseline = member;
                    cmp.r_predictor = *report.r[i][m];
                    cmp.r_baseline = *report.r[j][m];
                    const auto r23 = between_r(i, j);
                    cmp.r_between = r23.value_or(std::numeric_limits<double>::quiet_NaN());
                    try {
                        if (!r23) throw Error("undefined predictor correlation");
                        const auto result = williams_test(cmp.r_predictor, cmp.r_baseline, *r23, n);
                        cmp.t = result.t;
                        cmp.p = result.p;
                        cmp.significant = result.t > 0.0 && result.p < alpha;
                    } catch (const Error&) {
                        cmp.t = std::numeric_limits<double>::quiet_NaN();
                        cmp.p = std::numeric_limits<double>::quiet_NaN();
                        cmp.significant = false;
                    }
                    beats_all = beats_all && cmp.significant;
                    ++compared;
                    report.comparisons.push_back(std::move(cmp));
                }
                report.flags[i][m][g] = compared > 0 && beats_all;
            }
        }
    }
    return report;
}

void write_report_tsv(std::ostream& out, const CorrelationReport& report) {
    out << "## correlations\n";
    out << "predictor";
    for (const auto& m : report.metrics) out << '\t' << m;
    out << '\n';
    for (std::size_t i = 0; i < report.predictors.size(); ++i) {
        out << report.predictors[i];
        for (std::size_t m = 0; m < report.metrics.size(); ++m) out << '\t' << format_optional(report.r[i][m]);
        out << '\n';
    }

    out << "\n## samples\nmetric\tn\tdropped\n";
    for (std::size_t m = 0; m < report.metrics.size(); ++m)
        out << report.metrics[m] << '\t' << report.n[m] << '\t' << report.dropped[m] << '\n';

    out << "\n## settings\nkey\tvalue\nalpha\t" << format_value(report.alpha) << '\n';

    out << "\n## groups\ngroup\tmarker\tmembers\n";
    for (const auto& g : report.groups) out << g.name << '\t' << g.marker << '\t' << join(g.members, ',') << '\n';

    out << "\n## williams\nmetric\tgroup\tpredictor\tbaseline\tr_predictor\tr_baseline\tr_between\tt\tp\tsignificant\n";
    for (const auto& c : report.comparisons) {
        out << c.metric << '\t' << c.group << '\t' << c.predictor << '\t' << c.baseline << '\t'
            << format_value(c.r_predictor) << '\t' << format_value(c.r_baseline) << '\t'
            << format_value(c.r_between) << '\t' << format_value(c.t) << '\t' << format_value(c.p)
            << '\t' << (c.significant ? 1 : 0) << '\n';
    }

    out << "\n## flags\nmetric\tpredictor\tgroup\tflag\n";
    for (std::size_t m = 0; m < report.metrics.size(); ++m)
        for (std::size_t i = 0; i < report.predictors.size(); ++i)
            for (std::size_t g = 0; g < report.groups.size(); ++g)
                out << report.metrics[m] << '\t' << report.predictors[i] << '\t' << report.groups[g].name
                    << '\t' << (report.flags[i][m][g] ? 1 : 0) << '\n';
}

void write_report_tsv(const std::filesystem::path& path, const CorrelationReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report " + path.string());
    write_report_tsv(out, report);
    if (!out) throw Error("failed writing report " + path.string());
}

CorrelationReport parse_report_tsv(std::istream& in, const std::string& source) {
    CorrelationReport report;
    std::string line;
    std::size_t line_no = 0;
    std::string section;
    bool expect_header = false;
    std::map<std::string, std::size_t> pred_index;
    std::map<std::string, std::size_t> metric_index;
    std::map<std::string, std::size_t> group_index;

    const auto number = [&](std::string_view field) {
        double v = 0.0;
        if (!detail::parse_double(field, v))
            throw ParseError(source, line_no, "unparsable number '" + std::string(field) + "'");
        return v;
    };
    const auto count = [&](std::string_view field) {
        std::size_t v = 0;
        if (!detail::parse_int(field, v))
            throw ParseError(source, line_no, "unparsable count '" + std::string(field) + "'");
        return v;
    };
    const auto lookup = [&](const std::map<std::string, std::size_t>& table, std::string_view key) {
        const auto it = table.find(std::string(key));
        if (it == table.end()) throw ParseError(source, line_no, "unknown name '" + std::string(key) + "'");
        return it->second;
    };

    while (detail::read_line(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line.rfind("## ", 0) == 0) {
            section = line.substr(3);
            expect_header = true;
            continue;
        }
        const auto f = detail::split(line, '\t');
        if (expect_header) {
            expect_header = false;
            if (section == "correlations") {
                if (f.empty() || f[0] != "predictor") throw ParseError(source, line_no, "bad correlations header");
                for (std::size_t j = 1; j < f.size(); ++j) {
                    metric_index[std::string(f[j])] = j - 1;
                    report.metrics.emplace_back(f[j]);
                }
                report.n.assign(report.metrics.size(), 0);
                report.dropped.assign(report.metrics.size(), 0);
            }
            continue;
        }

        if (section == "correlations") {
            if (f.size() != report.metrics.size() + 1) throw ParseError(source, line_no, "wrong field count");
            pred_index[std::string(f[0])] = report.predictors.size();
            report.predictors.emplace_back(f[0]);
            std::vector<std::optional<double>> row;
            for (std::size_t j = 1; j < f.size(); ++j) {
                if (f[j] == "nan") row.emplace_back();
                else row.emplace_back(number(f[j]));
            }
            report.r.push_back(std::move(row));
        } else if (section == "samples") {
            if (f.size() != 3) throw ParseError(source, line_no, "wrong field count");
            const auto m = lookup(metric_index, f[0]);
            report.n[m] = count(f[1]);
            report.dropped[m] = count(f[2]);
        } else if (section == "settings") {
            if (f.size() != 2) throw ParseError(source, line_no, "wrong field count");
            if (f[0] == "alpha") report.alpha = number(f[1]);
        } else if (section == "groups") {
            if (f.size() != 3) throw ParseError(source, line_no, "wrong field count");
            BaselineGroup g{std::string(f[0]), std::string(f[1]), {}};
            if (!f[2].empty())
                for (const auto m : detail::split(f[2], ',')) g.members.emplace_back(m);
            group_index[g.name] = report.groups.size();
            report.groups.push_back(std::move(g));
            report.flags.assign(report.predictors.size(),
                                std::vector<std::vector<bool>>(report.metrics.size(),
                                                               std::vector<bool>(report.groups.size())));
        } else if (section == "williams") {
            if (f.size() != 10) throw ParseError(source, line_no, "wrong field count");
            WilliamsComparison c;
            c.metric = std::string(f[0]);
            c.group = std::string(f[1]);
            c.predictor = std::string(f[2]);
            c.baseline = std::string(f[3]);
            c.r_predictor = number(f[4]);
            c.r_baseline = number(f[5]);
            c.r_between = number(f[6]);
            c.t = number(f[7]);
            c.p = number(f[8]);
            c.significant = f[9] == "1";
            report.comparisons.push_back(std::move(c));
        } else if (section == "flags") {
            if (f.size() != 4) throw ParseError(source, line_no, "wrong field count");
            const auto m = lookup(metric_index, f[0]);
            const auto i = lookup(pred_index, f[1]);
            const auto g = lookup(group_index, f[2]);
            report.flags[i][m][g] = f[3] == "1";
        } else {
            throw ParseError(source, line_no, "content outside a known section");
        }
    }
    if (report.flags.size() != report.predictors.size()) {
        report.flags.assign(report.predictors.size(),
                            std::vector<std::vector<bool>>(report.metrics.size(),
                                                           std::vector<bool>(report.groups.size())));
    }
    if (report.predictors.empty() && report.metrics.empty())
        throw ParseError(source, line_no, "no correlations section");
    return report;
}

CorrelationReport read_report_tsv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open report " + path.string());
    return parse_report_tsv(in, path.string());
}

std::string render_report_text(const CorrelationReport& report) {
    std::vector<std::vector<std::string>> cells(report.predictors.size(),
                                                std::vector<std::string>(report.metrics.size()));
    for (std::size_t i = 0; i < report.predictors.size(); ++i) {
        for (std::size_t m = 0; m < report.metrics.size(); ++m) {
            if (!report.r[i][m]) {
                cells[i][m] = "n/a";
                continue;
            }
            // Groups are usually nested (†: some baselines, ††: all of them),
            // so only the marker of the last group beaten is shown.
            std::string cell = format_r_short(*report.r[i][m]);
            for (std::size_t g = report.groups.size(); g-- > 0;) {
                if (report.flags[i][m][g]) {
                    cell += report.groups[g].marker;
                    break;
                }
            }
            cells[i][m] = std::move(cell);
        }
    }

    std::size_t name_width = std::string("predictor").size();
    for (const auto& p : report.predictors) name_width = std::max(name_width, utf8_width(p));
    std::vector<std::size_t> widths(report.metrics.size());
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
        widths[m] = utf8_width(report.metrics[m]);
        for (const auto& row : cells) widths[m] = std::max(widths[m], utf8_width(row[m]));
    }

    std::ostringstream out;
    out << "Pearson correlation between predicted and actual gain\n\n";
    out << pad_right("predictor", name_width);
    for (std::size_t m = 0; m < report.metrics.size(); ++m) out << "  " << pad_left(report.metrics[m], widths[m]);
    out << '\n';
    std::size_t rule = name_width;
    for (const auto w : widths) rule += 2 + w;
    out << std::string(rule, '-') << '\n';
    for (std::size_t i = 0; i < report.predictors.size(); ++i) {
        out << pad_right(report.predictors[i], name_width);
        for (std::size_t m = 0; m < report.metrics.size(); ++m) out << "  " << pad_left(cells[i][m], widths[m]);
        out << '\n';
    }
    out << '\n';
    for (std::size_t m = 0; m < report.metrics.size(); ++m) {
        out << report.metrics[m] << ": n = " << report.n[m];
        if (report.dropped[m] > 0) out << " (" << report.dropped[m] << " dropped by alignment)";
        out << '\n';
    }
    for (const auto& g : report.groups) {
        out << g.marker << " significantly better than every predictor in '" << g.name
            << "' (Williams two-tailed t-test, alpha = " << format_value(report.alpha) << ")\n";
    }
    return out.str();
}

}  // namespace raggain
