#include "raggain/score_table.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "raggain/error.hpp"
#include "text_util.hpp"

namespace raggain {

std::string format_value(double value) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.9g", value);
    return std::string(buf, static_cast<std::size_t>(n));
}

ScoreTable parse_score_table(std::istream& in, const std::string& source) {
    ScoreTable table;
    std::string line;
    std::size_t line_no = 0;

    if (!detail::read_line(in, line)) throw ParseError(source, 1, "missing header line");
    ++line_no;
    const auto header = detail::split(line, '\t');
    if (header.size() != 2 || header[0] != "qid" || header[1].empty())
        throw ParseError(source, line_no, "header must be 'qid<TAB><name>'");
    table.value_name = std::string(header[1]);

    while (detail::read_line(in, line)) {
        ++line_no;
        const auto fields = detail::split(line, '\t');
        if (fields.size() != 2)
            throw ParseError(source, line_no, "expected 2 tab-separated fields, got " +
                                                  std::to_string(fields.size()));
        if (fields[0].empty()) throw ParseError(source, line_no, "empty qid");
        double value = 0.0;
        if (!detail::parse_double(fields[1], value))
            throw ParseError(source, line_no, "unparsable value '" + std::string(fields[1]) + "'");
        if (!std::isfinite(value))
            throw ParseError(source, line_no, "non-finite value '" + std::string(fields[1]) + "'");
        if (!table.values.emplace(std::string(fields[0]), value).second)
            throw ParseError(source, line_no, "duplicate qid '" + std::string(fields[0]) + "'");
    }
    return table;
}

ScoreTable read_score_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open score table " + path.string());
    return parse_score_table(in, path.string());
}

void write_score_table(std::ostream& out, const ScoreTable& table) {
    out << "qid\t" << table.value_name << '\n';
    for (const auto& [qid, value] : table.values) out << qid << '\t' << format_value(value) << '\n';
}

void write_score_table(const std::filesystem::path& path, const ScoreTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write score table " + path.string());
    write_score_table(out, table);
    if (!out) throw Error("failed writing score table " + path.string());
}

}  // namespace raggain
