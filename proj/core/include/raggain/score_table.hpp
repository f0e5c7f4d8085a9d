#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace raggain {

/// Per-question values keyed by qid. std::map keeps every output qid-sorted.
using Column = std::map<std::string, double>;

/// TSV exchange format: header `qid<TAB><value_name>`, one `qid<TAB>value`
/// row per question, values printed with 9 significant digits.
struct ScoreTable {
    std::string value_name = "value";
    Column values;
};

/// Rejects, with `source:line` diagnostics: wrong header, wrong field count,
/// empty or duplicate qid, unparsable or non-finite value.
ScoreTable parse_score_table(std::istream& in, const std::string& source);
ScoreTable read_score_table(const std::filesystem::path& path);

void write_score_table(std::ostream& out, const ScoreTable& table);
void write_score_table(const std::filesystem::path& path, const ScoreTable& table);

/// `%.9g` rendering used by every numeric TSV column.
std::string format_value(double value);

}  // namespace raggain
