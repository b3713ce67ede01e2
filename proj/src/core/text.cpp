#include "text.hpp"

#include <cctype>

namespace cavkit {

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_token_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 'A' && u <= 'Z') c = static_cast<char>(u - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text, std::size_t min_len) {
    std::string lowered = to_lower(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < lowered.size()) {
        while (i < lowered.size() && !is_token_char(static_cast<unsigned char>(lowered[i]))) ++i;
        std::size_t start = i;
        while (i < lowered.size() && is_token_char(static_cast<unsigned char>(lowered[i]))) ++i;
        if (i - start >= min_len && i > start) tokens.emplace_back(lowered.substr(start, i - start));
    }
    return tokens;
}

}  // namespace cavkit
