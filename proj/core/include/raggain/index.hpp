#pragma once

/// \file index.hpp
/// In-memory inverted index over a passage corpus with BM25 retrieval and
/// the corpus-level term statistics used by pre-retrieval predictors.
///
/// Built once, immutable afterwards: every query-side function is a pure
/// function of (index, query) and is safe to call from many threads.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "raggain/ranked_list.hpp"

namespace raggain {

struct Passage {
    std::string doc_id;
    std::string text;
};

struct Posting {
    std::uint32_t doc = 0;  ///< position in Index::doc_ids()
    std::uint32_t tf = 0;
};

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

/// Per-term corpus statistics. An unindexed term has every field zero.
struct TermStats {
    std::string term;
    std::uint64_t df = 0;
    std::uint64_t cf = 0;
    double idf = 0.0;  ///< ln(N / df)
    double scq = 0.0;  ///< (1 + ln cf) * ln(1 + N / df)
    double var = 0.0;  ///< population variance of (1 + ln tf) * idf over docs containing the term
};

class Index {
public:
    Index() = default;

    std::size_t n_docs() const noexcept { return doc_ids_.size(); }
    std::uint64_t total_tokens() const noexcept { return total_tokens_; }
    double avg_doc_length() const noexcept;

    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_lengths_; }

    /// Postings of `term` in ascending doc order; empty span when unindexed.
    std::span<const Posting> postings(std::string_view term) const;
    std::uint64_t df(std::string_view term) const { return postings(term).size(); }
    std::uint64_t cf(std::string_view term) const;

    std::size_t vocabulary_size() const noexcept { return postings_.size(); }

    /// Terms in lexicographic order.
    std::vector<std::string> sorted_terms() const;

    /// Writes a deterministic JSON representation (sorted keys).
    void save(const std::filesystem::path& path) const;
    static Index load(const std::filesystem::path& path);

    friend Index build_index(std::span<const Passage> corpus);

private:
    struct TermEntry {
        std::vector<Posting> postings;
        std::uint64_t cf = 0;
    };

    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    void validate() const;

    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::uint64_t total_tokens_ = 0;
    std::unordered_map<std::string, TermEntry, StringHash, std::equal_to<>> postings_;
};

/// Throws raggain::Error naming the doc id on duplicates or on passages that
/// tokenize to nothing.
Index build_index(std::span<const Passage> corpus);

/// BM25 weight of one term occurrence count in a document of the given length.
/// Exposed so callers (and the corpus score) share one closed form.
double bm25_term_weight(const Index& index, std::string_view term, double tf, double doc_length,
                        const Bm25Params& params);

/// Top-k documents by BM25, score descending then doc id ascending. Only
/// documents that match at least one query term are returned. Throws on an
/// empty query or k == 0.
RankedList bm25_search(const Index& index, std::span<const std::string> query, std::size_t k,
                       const Bm25Params& params = {});

/// BM25 of the whole collection treated as one pseudo-document
/// (length = total tokens, tf = collection frequency).
double corpus_score(const Index& index, std::span<const std::string> query,
                    const Bm25Params& params = {});

TermStats term_stats(const Index& index, std::string_view term);

}  // namespace raggain
