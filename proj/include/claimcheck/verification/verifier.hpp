#pragma once

#include <string>
#include <vector>

#include "claimcheck/core/types.hpp"
#include "claimcheck/llm/gateway.hpp"

namespace claimcheck::verification {

inline constexpr std::string_view kUnparseableRationale = "unparseable model output";
inline constexpr std::string_view kPrescreenRationale = "pre-screened: unrelated";

struct VerifierOptions {
  int max_reasks = 2;
  // Whitespace tokens of search-result text shown to the model.
  std::size_t result_token_budget = 3000;
  // Ask the relevance prompt first and skip verification of unrelated results.
  bool prescreen = false;
};

// "Title: <title>\n<snippet_or_body>", cut to the first `token_budget`
// whitespace tokens.
std::string search_result_text(const core::SearchResult& result, std::size_t token_budget);

struct Relevance {
  bool same_story = false;
  bool related = true;
  friend bool operator==(const Relevance&, const Relevance&) = default;
};

class Verifier {
 public:
  explicit Verifier(llm::Gateway& gateway, VerifierOptions options = {})
      : gateway_(gateway), options_(options) {}

  // Never throws on model trouble: an unusable answer or a failed call after
  // re-asks becomes (baseless, low, "unparseable model output"). source_tier
  // is left empty.
  core::EvidenceItem verify_pair(const core::Claim& claim, const core::SearchResult& result);

  // Fails open: any parse or transport failure reads as (false, true).
  Relevance relevance_check(const core::Claim& claim, const core::SearchResult& result);

  // One item per pool entry, canonically sorted. Calls fan out up to the
  // gateway's in-flight limit.
  std::vector<core::EvidenceItem> verify_claim(const core::Claim& claim,
                                               const std::vector<core::SearchResult>& pool);

  const VerifierOptions& options() const { return options_; }

 private:
  core::EvidenceItem judge(const core::Claim& claim, const core::SearchResult& result);

  llm::Gateway& gateway_;
  VerifierOptions options_;
};

}  // namespace claimcheck::verification
