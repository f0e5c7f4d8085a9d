#include "raggain/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "raggain/error.hpp"
#include "raggain/score_table.hpp"
#include "text_util.hpp"

namespace raggain {

namespace {

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path, std::string_view what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + std::string(what) + " " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::string_view what) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + std::string(what) + " " + path.string());
    return out;
}

/// Calls `fn(object, line_no)` for every non-blank JSONL line.
template <typename Fn>
void for_each_json_line(std::istream& in, const std::string& source, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        json object;
        try {
            object = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!object.is_object()) throw ParseError(source, line_no, "expected a JSON object");
        fn(object, line_no);
    }
}

std::string string_field(const json& object, const char* key, const std::string& source,
                         std::size_t line_no) {
    const auto it = object.find(key);
    if (it == object.end()) throw ParseError(source, line_no, std::string("missing field '") + key + "'");
    if (!it->is_string()) throw ParseError(source, line_no, std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

}  // namespace

std::vector<Passage> parse_corpus(std::istream& in, const std::string& source) {
    std::vector<Passage> corpus;
    std::unordered_set<std::string> seen;
    for_each_json_line(in, source, [&](const json& object, std::size_t line_no) {
        Passage passage{string_field(object, "doc_id", source, line_no),
                        string_field(object, "text", source, line_no)};
        if (passage.doc_id.empty()) throw ParseError(source, line_no, "empty doc_id");
        if (passage.doc_id.find_first_of(" \t") != std::string::npos)
            throw ParseError(source, line_no, "doc_id '" + passage.doc_id + "' contains whitespace");
        if (!seen.insert(passage.doc_id).second)
            throw ParseError(source, line_no, "duplicate doc_id '" + passage.doc_id + "'");
        corpus.push_back(std::move(passage));
    });
    return corpus;
}

std::vector<Passage> read_corpus(const std::filesystem::path& path) {
    auto in = open_input(path, "corpus");
    return parse_corpus(in, path.string());
}

void write_corpus(const std::filesystem::path& path, const std::vector<Passage>& corpus) {
    auto out = open_output(path, "corpus");
    for (const auto& p : corpus) out << json{{"doc_id", p.doc_id}, {"text", p.text}}.dump() << '\n';
}

std::vector<QuestionRecord> parse_queries(std::istream& in, const std::string& source) {
    std::vector<QuestionRecord> queries;
    std::unordered_set<std::string> seen;
    for_each_json_line(in, source, [&](const json& object, std::size_t line_no) {
        QuestionRecord record;
        record.qid = string_field(object, "qid", source, line_no);
        record.question = string_field(object, "question", source, line_no);
        if (record.qid.empty()) throw ParseError(source, line_no, "empty qid");
        if (record.qid.find_first_of(" \t") != std::string::npos)
            throw ParseError(source, line_no, "qid '" + record.qid + "' contains whitespace");

        const auto it = object.find("answers");
        if (it == object.end()) throw ParseError(source, line_no, "missing field 'answers'");
        if (!it->is_array()) throw ParseError(source, line_no, "field 'answers' must be an array");
        for (const auto& answer : *it) {
            if (!answer.is_string()) throw ParseError(source, line_no, "answers must be strings");
            record.answers.push_back(answer.get<std::string>());
        }
        if (record.answers.empty())
            throw ParseError(source, line_no, "qid '" + record.qid + "' has no reference answers");
        if (!seen.insert(record.qid).second)
            throw ParseError(source, line_no, "duplicate qid '" + record.qid + "'");
        queries.push_back(std::move(record));
    });
    return queries;
}

std::vector<QuestionRecord> read_queries(const std::filesystem::path& path) {
    auto in = open_input(path, "queries");
    return parse_queries(in, path.string());
}

void write_queries(const std::filesystem::path& path, const std::vector<QuestionRecord>& queries) {
    auto out = open_output(path, "queries");
    for (const auto& q : queries)
        out << json{{"qid", q.qid}, {"question", q.question}, {"answers", q.answers}}.dump() << '\n';
}

GenerationLog parse_generation_log(std::istream& in, const std::string& source) {
    GenerationLog log;
    for_each_json_line(in, source, [&](const json& object, std::size_t line_no) {
        GenerationRecord record;
        record.qid = string_field(object, "qid", source, line_no);
        if (record.qid.empty()) throw ParseError(source, line_no, "empty qid");
        const auto mode_text = string_field(object, "mode", source, line_no);
        const auto mode = parse_generation_mode(mode_text);
        if (!mode) throw ParseError(source, line_no, "mode must be 'rag' or 'norag', got '" + mode_text + "'");
        record.mode = *mode;
        record.answer = string_field(object, "answer", source, line_no);
        if (detail::trim(record.answer).empty())
            throw ParseError(source, line_no, "empty answer for qid '" + record.qid + "'");

        const auto it = object.find("token_entropies");
        if (it == object.end()) throw ParseError(source, line_no, "missing field 'token_entropies'");
        if (!it->is_array()) throw ParseError(source, line_no, "field 'token_entropies' must be an array");
        for (const auto& h : *it) {
            if (!h.is_number()) throw ParseError(source, line_no, "token entropies must be numbers");
            const double value = h.get<double>();
            if (!std::isfinite(value) || value < 0.0)
                throw ParseError(source, line_no, "token entropies must be finite and non-negative");
            record.token_entropies.push_back(value);
        }
        if (record.token_entropies.empty())
            throw ParseError(source, line_no, "no token entropies for non-empty answer");

        auto& bucket = record.mode == GenerationMode::rag ? log.rag : log.norag;
        const auto qid = record.qid;
        if (!bucket.emplace(qid, std::move(record)).second) {
            throw ParseError(source, line_no,
                             "duplicate " + mode_text + " record for qid '" + qid + "'");
        }
    });
    return log;
}

GenerationLog read_generation_log(const std::filesystem::path& path) {
    auto in = open_input(path, "generation log");
    return parse_generation_log(in, path.string());
}

RunCollection parse_run_file(std::istream& in, const std::string& source) {
    RunCollection runs;
    std::map<std::string, std::set<std::string, std::less<>>> seen_docs;
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
        ++line_no;
        const auto fields = detail::split_whitespace(line);
        if (fields.size() != 6) {
            throw ParseError(source, line_no, "expected 6 fields 'qid Q0 doc_id rank score tag', got " +
                                                  std::to_string(fields.size()));
        }
        std::size_t rank = 0;
        if (!detail::parse_int(fields[3], rank) || rank == 0)
            throw ParseError(source, line_no, "invalid rank '" + std::string(fields[3]) + "'");
        double score = 0.0;
        if (!detail::parse_double(fields[4], score))
            throw ParseError(source, line_no, "unparsable score '" + std::string(fields[4]) + "'");
        if (!std::isfinite(score))
            throw ParseError(source, line_no, "non-finite score '" + std::string(fields[4]) + "'");

        const std::string qid(fields[0]);
        auto& list = runs[qid];
        list.qid = qid;
        if (rank != list.size() + 1) {
            throw ParseError(source, line_no, "rank " + std::to_string(rank) + " for qid '" + qid +
                                                  "' but expected " + std::to_string(list.size() + 1));
        }
        if (!list.empty() && score > list.entries.back().score) {
            throw ParseError(source, line_no, "non-monotonic scores for qid '" + qid + "': " +
                                                  std::string(fields[4]) + " after " +
                                                  format_value(list.entries.back().score));
        }
        if (!seen_docs[qid].emplace(fields[2]).second) {
            throw ParseError(source, line_no,
                             "duplicate doc_id '" + std::string(fields[2]) + "' for qid '" + qid + "'");
        }
        list.entries.push_back({std::string(fields[2]), score});
    }
    return runs;
}

RunCollection read_run_file(const std::filesystem::path& path) {
    auto in = open_input(path, "run file");
    return parse_run_file(in, path.string());
}

void write_run_file(std::ostream& out, const RunCollection& runs, const std::string& tag) {
    char buf[64];
    for (const auto& [qid, list] : runs) {
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", list.entries[i].score);
            out << qid << " Q0 " << list.entries[i].doc_id << ' ' << (i + 1) << ' ' << buf << ' '
                << tag << '\n';
        }
    }
}

void write_run_file(const std::filesystem::path& path, const RunCollection& runs,
                    const std::string& tag) {
    auto out = open_output(path, "run file");
    write_run_file(out, runs, tag);
    if (!out) throw Error("failed writing run file " + path.string());
}

}  // namespace raggain
