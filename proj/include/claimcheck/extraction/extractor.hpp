#pragma once

#include <string>
#include <vector>

#include "claimcheck/core/types.hpp"
#include "claimcheck/llm/gateway.hpp"

namespace claimcheck::extraction {

inline constexpr std::size_t kMaxKeyClaims = 16;

struct ExtractionOptions {
  // Extra attempts after an unparseable answer.
  int format_reasks = 2;
  // Extra attempts after a main claim that fails the self-containedness check.
  int self_contained_reasks = 1;
  std::size_t max_key_claims = kMaxKeyClaims;
};

// False when the text opens with a bare third-person pronoun or has fewer than
// four whitespace tokens.
bool self_containedness_check(std::string_view claim_text);

// Text shown to the model: the title (when present) followed by the body.
std::string article_content(const core::NewsArticle& article);

std::string main_claim_id(const std::string& article_id);
std::string key_claim_id(const std::string& article_id, int ordinal);

// Exact case-folded duplicates removed, first occurrence kept, blanks dropped.
std::vector<std::string> dedup_claim_texts(const std::vector<std::string>& texts);

class ClaimExtractor {
 public:
  explicit ClaimExtractor(llm::Gateway& gateway, ExtractionOptions options = {})
      : gateway_(gateway), options_(options) {}

  // Throws Error(empty_article) for a blank body and Error(extraction_failure)
  // when no parseable answer arrives. A main claim that is still not
  // self-contained after the re-ask is kept as is.
  core::Claim extract_main_claim(const core::NewsArticle& article);

  // At least one claim, ordinals 0..n-1 in model order, capped at
  // max_key_claims.
  std::vector<core::Claim> extract_key_claims(const core::NewsArticle& article);

 private:
  llm::Gateway& gateway_;
  ExtractionOptions options_;
};

}  // namespace claimcheck::extraction
