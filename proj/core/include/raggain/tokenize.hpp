#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace raggain {

/// Lowercases ASCII letters and splits on whitespace and ASCII punctuation.
/// Bytes >= 0x80 are kept as token characters, so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace raggain
