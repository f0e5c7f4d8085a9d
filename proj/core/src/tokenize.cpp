#include "raggain/tokenize.hpp"

namespace raggain {

namespace {

bool is_separator(unsigned char c) {
    if (c >= 0x80) return false;
    return !((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_separator(c)) {
            if (!current.empty()) tokens.push_back(std::move(current));
            current.clear();
            continue;
        }
        current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

}  // namespace raggain
