#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "raggain/config.hpp"
#include "raggain/error.hpp"
#include "raggain/io.hpp"
#include "raggain/score_table.hpp"

namespace raggain::testing {

struct MalformedCase {
    std::string file;
    std::string kind;
    std::size_t line = 0;
};

inline std::vector<MalformedCase> load_malformed_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.tsv");
    std::vector<MalformedCase> cases;
    std::string header;
    std::getline(in, header);
    MalformedCase c;
    while (in >> c.file >> c.kind >> c.line) cases.push_back(c);
    return cases;
}

inline void read_as(const std::string& kind, const std::filesystem::path& path) {
    if (kind == "run") read_run_file(path);
    else if (kind == "scores") read_score_table(path);
    else if (kind == "queries") read_queries(path);
    else if (kind == "generations") read_generation_log(path);
    else if (kind == "corpus") read_corpus(path);
    else if (kind == "config") load_config(path);
    else throw std::logic_error("unknown malformed kind " + kind);
}

/// Empty when the file is rejected with the expected `path:line` diagnostic;
/// otherwise a description of what went wrong.
inline std::string check_malformed(const std::filesystem::path& dir, const MalformedCase& c) {
    const auto path = dir / c.file;
    try {
        read_as(c.kind, path);
    } catch (const ParseError& e) {
        const std::string expected = path.string() + ":" + std::to_string(c.line) + ":";
        if (std::string(e.what()).rfind(expected, 0) != 0)
            return c.file + ": expected prefix '" + expected + "', got '" + e.what() + "'";
        return {};
    } catch (const std::exception& e) {
        return c.file + ": rejected without a location: " + e.what();
    }
    return c.file + ": accepted";
}

}  // namespace raggain::testing
