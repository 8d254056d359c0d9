#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace claimcheck::core {

std::string_view trim(std::string_view s);

// ASCII case fold. Bytes outside A-Z are copied unchanged.
std::string casefold(std::string_view s);

// Case-folded tokens: maximal runs of ASCII alphanumerics. Non-ASCII bytes
// count as separators.
std::vector<std::string> alnum_tokens(std::string_view s);

std::vector<std::string_view> whitespace_tokens(std::string_view s);

// First `max_tokens` whitespace-delimited tokens of `s`, original spacing kept.
std::string truncate_tokens(std::string_view s, std::size_t max_tokens);

// True when the first whitespace token, stripped of punctuation, is a bare
// third-person pronoun (he, she, it, they, ...).
bool starts_with_bare_pronoun(std::string_view s);

std::string sha256_hex(std::string_view data);

}  // namespace claimcheck::core
