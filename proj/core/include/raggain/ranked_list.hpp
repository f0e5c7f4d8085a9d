#pragma once

#include <string>
#include <vector>

namespace raggain {

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;
};

/// Retrieval result for one query, best first. Scores are non-increasing and
/// doc ids are distinct; parsers and retrieval uphold this, consumers rely on it.
struct RankedList {
    std::string qid;
    std::vector<RankedEntry> entries;

    bool empty() const noexcept { return entries.empty(); }
    std::size_t size() const noexcept { return entries.size(); }
};

}  // namespace raggain
