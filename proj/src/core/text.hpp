#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cavkit {

// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// ASCII lowercase; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view s);

// Tokens are maximal runs of [a-z0-9] plus any byte >= 0x80, after ASCII
// lowercasing. Punctuation and whitespace separate tokens. min_len filters
// short tokens (the vocab analysis uses 2, the featurizer 1).
std::vector<std::string> tokenize(std::string_view text, std::size_t min_len = 1);

}  // namespace cavkit
