#pragma once

/// \file io.hpp
/// Readers and writers for the toolkit's line-oriented input formats. Every
/// reader rejects malformed input with a `path:line` diagnostic and never
/// repairs it.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "raggain/index.hpp"
#include "raggain/predictors_gen.hpp"
#include "raggain/ranked_list.hpp"

namespace raggain {

/// A question with its reference answers.
struct QuestionRecord {
    std::string qid;
    std::string question;
    std::vector<std::string> answers;
};

/// Corpus JSONL: {"doc_id": str, "text": str} per line.
std::vector<Passage> parse_corpus(std::istream& in, const std::string& source);
std::vector<Passage> read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const std::vector<Passage>& corpus);

/// Queries JSONL: {"qid": str, "question": str, "answers": [str, ...]} per line.
std::vector<QuestionRecord> parse_queries(std::istream& in, const std::string& source);
std::vector<QuestionRecord> read_queries(const std::filesystem::path& path);
void write_queries(const std::filesystem::path& path, const std::vector<QuestionRecord>& queries);

/// Generation records split by mode, keyed by qid.
struct GenerationLog {
    std::map<std::string, GenerationRecord> rag;
    std::map<std::string, GenerationRecord> norag;
};

/// Generation-log JSONL: {"qid", "mode": "rag"|"norag", "answer", "token_entropies": [num]}.
/// Empty answers, empty or negative entropies, and repeated (qid, mode) pairs are rejected.
GenerationLog parse_generation_log(std::istream& in, const std::string& source);
GenerationLog read_generation_log(const std::filesystem::path& path);

using RunCollection = std::map<std::string, RankedList>;

/// TREC run: `qid Q0 doc_id rank score tag`, whitespace separated. Lines of
/// different qids may interleave; within a qid ranks must run 1, 2, 3, ...
/// with non-increasing scores and distinct doc ids.
RunCollection parse_run_file(std::istream& in, const std::string& source);
RunCollection read_run_file(const std::filesystem::path& path);

/// Writes lists in map (qid) order, scores with 6 decimals.
void write_run_file(std::ostream& out, const RunCollection& runs, const std::string& tag);
void write_run_file(const std::filesystem::path& path, const RunCollection& runs,
                    const std::string& tag);

}  // namespace raggain
