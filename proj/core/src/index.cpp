#include "raggain/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "raggain/error.hpp"
#include "raggain/tokenize.hpp"

namespace raggain {

namespace {

constexpr int kIndexFormatVersion = 1;

double bm25_idf(double n_docs, double df) {
    return std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
}

double bm25_component(double idf, double tf, double doc_length, double avg_length,
                      const Bm25Params& params) {
    const double norm = params.k1 * (1.0 - params.b + params.b * doc_length / avg_length);
    return idf * (tf * (params.k1 + 1.0)) / (tf + norm);
}

}  // namespace

double Index::avg_doc_length() const noexcept {
    if (doc_ids_.empty()) return 0.0;
    return static_cast<double>(total_tokens_) / static_cast<double>(doc_ids_.size());
}

std::span<const Posting> Index::postings(std::string_view term) const {
    const auto it = postings_.find(term);
    if (it == postings_.end()) return {};
    return it->second.postings;
}

std::uint64_t Index::cf(std::string_view term) const {
    const auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.cf;
}

std::vector<std::string> Index::sorted_terms() const {
    std::vector<std::string> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, _] : postings_) terms.push_back(term);
    std::sort(terms.begin(), terms.end());
    return terms;
}

void Index::validate() const {
    std::uint64_t length_sum = 0;
    for (const auto len : doc_lengths_) length_sum += len;
    if (length_sum != total_tokens_) throw Error("index: document lengths do not sum to total tokens");

    std::vector<std::uint64_t> per_doc(doc_ids_.size(), 0);
    for (const auto& [term, entry] : postings_) {
        if (entry.postings.empty()) throw Error("index: term '" + term + "' has no postings");
        if (entry.postings.size() > doc_ids_.size())
            throw Error("index: df exceeds document count for term '" + term + "'");
        std::uint64_t cf = 0;
        std::uint32_t prev = 0;
        for (std::size_t i = 0; i < entry.postings.size(); ++i) {
            const auto& p = entry.postings[i];
            if (p.doc >= doc_ids_.size() || p.tf == 0 || (i > 0 && p.doc <= prev))
                throw Error("index: malformed posting list for term '" + term + "'");
            prev = p.doc;
            cf += p.tf;
            per_doc[p.doc] += p.tf;
        }
        if (cf != entry.cf) throw Error("index: collection frequency mismatch for term '" + term + "'");
    }
    for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
        if (per_doc[d] != doc_lengths_[d])
            throw Error("index: length of document '" + doc_ids_[d] + "' disagrees with postings");
    }
}

Index build_index(std::span<const Passage> corpus) {
    Index index;
    std::unordered_set<std::string_view> seen;
    seen.reserve(corpus.size());
    index.doc_ids_.reserve(corpus.size());
    index.doc_lengths_.reserve(corpus.size());

    for (const auto& passage : corpus) {
        if (!seen.insert(passage.doc_id).second)
            throw Error("duplicate doc_id '" + passage.doc_id + "'");
        const auto tokens = tokenize(passage.text);
        if (tokens.empty())
            throw Error("passage '" + passage.doc_id + "' has no tokens");

        const auto doc = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(passage.doc_id);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        index.total_tokens_ += tokens.size();

        for (const auto& token : tokens) {
            auto& entry = index.postings_[token];
            if (entry.postings.empty() || entry.postings.back().doc != doc)
                entry.postings.push_back({doc, 0});
            ++entry.postings.back().tf;
            ++entry.cf;
        }
    }
    return index;
}

void Index::save(const std::filesystem::path& path) const {
    nlohmann::json root;
    root["format"] = "raggain-index";
    root["version"] = kIndexFormatVersion;
    auto docs = nlohmann::json::array();
    for (std::size_t d = 0; d < doc_ids_.size(); ++d)
        docs.push_back({{"id", doc_ids_[d]}, {"length", doc_lengths_[d]}});
    root["docs"] = std::move(docs);

    // nlohmann::json objects are std::map backed, so terms serialize sorted.
    auto postings = nlohmann::json::object();
    for (const auto& [term, entry] : postings_) {
        auto list = nlohmann::json::array();
        for (const auto& p : entry.postings) list.push_back({p.doc, p.tf});
        postings[term] = std::move(list);
    }
    root["postings"] = std::move(postings);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write index file " + path.string());
    out << root.dump() << '\n';
    if (!out) throw Error("failed writing index file " + path.string());
}

Index Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index file " + path.string());
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw Error("index file " + path.string() + ": " + e.what());
    }

    Index index;
    try {
        if (root.at("format") != "raggain-index" || root.at("version") != kIndexFormatVersion)
            throw Error("index file " + path.string() + ": unsupported format or version");
        for (const auto& doc : root.at("docs")) {
            index.doc_ids_.push_back(doc.at("id").get<std::string>());
            const auto len = doc.at("length").get<std::uint32_t>();
            index.doc_lengths_.push_back(len);
            index.total_tokens_ += len;
        }
        for (const auto& [term, list] : root.at("postings").items()) {
            Index::TermEntry entry;
            for (const auto& pair : list) {
                const Posting p{pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint32_t>()};
                entry.postings.push_back(p);
                entry.cf += p.tf;
            }
            index.postings_.emplace(term, std::move(entry));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("index file " + path.string() + ": " + e.what());
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& id : index.doc_ids_) {
        if (!seen.insert(id).second) throw Error("index file: duplicate doc_id '" + id + "'");
    }
    index.validate();
    return index;
}

double bm25_term_weight(const Index& index, std::string_view term, double tf, double doc_length,
                        const Bm25Params& params) {
    const auto df = static_cast<double>(index.df(term));
    if (df == 0.0 || tf <= 0.0) return 0.0;
    const double idf = bm25_idf(static_cast<double>(index.n_docs()), df);
    return bm25_component(idf, tf, doc_length, index.avg_doc_length(), params);
}

RankedList bm25_search(const Index& index, std::span<const std::string> query, std::size_t k,
                       const Bm25Params& params) {
    if (query.empty()) throw Error("bm25_search: empty query, retrieval is unpredictable");
    if (k == 0) throw Error("bm25_search: k must be at least 1");

    const double n_docs = static_cast<double>(index.n_docs());
    const double avg_length = index.avg_doc_length();
    const auto& lengths = index.doc_lengths();

    std::vector<double> acc(index.n_docs(), 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> is_touched(index.n_docs(), 0);

    // Term-at-a-time in query order; duplicates contribute once per occurrence.
    for (const auto& term : query) {
        const auto postings = index.postings(term);
        if (postings.empty()) continue;
        const double idf = bm25_idf(n_docs, static_cast<double>(postings.size()));
        for (const auto& p : postings) {
            acc[p.doc] += bm25_component(idf, static_cast<double>(p.tf),
                                         static_cast<double>(lengths[p.doc]), avg_length, params);
            if (!is_touched[p.doc]) {
                is_touched[p.doc] = 1;
                touched.push_back(p.doc);
            }
        }
    }

    const auto& ids = index.doc_ids();
    const auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (acc[a] != acc[b]) return acc[a] > acc[b];
        return ids[a] < ids[b];
    };
    const auto n = std::min(k, touched.size());
    std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(n),
                      touched.end(), better);

    RankedList list;
    list.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) list.entries.push_back({ids[touched[i]], acc[touched[i]]});
    return list;
}

double corpus_score(const Index& index, std::span<const std::string> query,
                    const Bm25Params& params) {
    if (query.empty()) throw Error("corpus_score: empty query");
    const auto total = static_cast<double>(index.total_tokens());
    double score = 0.0;
    for (const auto& term : query) {
        score += bm25_term_weight(index, term, static_cast<double>(index.cf(term)), total, params);
    }
    return score;
}

TermStats term_stats(const Index& index, std::string_view term) {
    TermStats stats;
    stats.term = std::string(term);
    const auto postings = index.postings(term);
    if (postings.empty()) return stats;

    const double n = static_cast<double>(index.n_docs());
    const double df = static_cast<double>(postings.size());
    stats.df = postings.size();
    stats.cf = index.cf(term);
    stats.idf = std::log(n / df);
    stats.scq = (1.0 + std::log(static_cast<double>(stats.cf))) * std::log(1.0 + n / df);

    if (postings.size() > 1) {
        double mean = 0.0;
        for (const auto& p : postings) mean += (1.0 + std::log(static_cast<double>(p.tf))) * stats.idf;
        mean /= df;
        double ss = 0.0;
        for (const auto& p : postings) {
            const double w = (1.0 + std::log(static_cast<double>(p.tf))) * stats.idf;
            ss += (w - mean) * (w - mean);
        }
        stats.var = ss / df;
    }
    return stats;
}

}  // namespace raggain
