#include "claimcheck/core/text.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <stdexcept>

namespace claimcheck::core {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

}  // namespace

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string casefold(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<std::string> alnum_tokens(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : s) {
    if (is_ascii_alnum(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string_view> whitespace_tokens(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

std::string truncate_tokens(std::string_view s, std::size_t max_tokens) {
  std::size_t seen = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i == s.size()) break;
    if (seen == max_tokens) return std::string(trim(s.substr(0, i)));
    while (i < s.size() && !is_space(s[i])) ++i;
    ++seen;
  }
  return std::string(s);
}

bool starts_with_bare_pronoun(std::string_view s) {
  static constexpr std::string_view kPronouns[] = {"he",  "she",  "it",  "they", "him",
                                                   "her", "them", "his", "its",  "their"};
  const auto tokens = whitespace_tokens(s);
  if (tokens.empty()) return false;
  // Leading quotes are skipped; the word ends at the first non-alphanumeric
  // byte so that "It's" is read as "it".
  std::string_view token = tokens.front();
  while (!token.empty() && !is_ascii_alnum(token.front())) token.remove_prefix(1);
  std::size_t len = 0;
  while (len < token.size() && is_ascii_alnum(token[len])) ++len;
  const std::string first = casefold(token.substr(0, len));
  for (auto p : kPronouns) {
    if (first == p) return true;
  }
  return false;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace claimcheck::core
