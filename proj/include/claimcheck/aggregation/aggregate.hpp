#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "claimcheck/aggregation/features.hpp"
#include "claimcheck/aggregation/gbdt.hpp"
#include "claimcheck/core/types.hpp"

namespace claimcheck::aggregation {

// Weight per tier, index 0 = tier 1.
using TierWeights = std::array<double, 5>;
inline constexpr TierWeights kDefaultTierWeights{0.25, 0.5, 1.0, 1.5, 2.0};

struct RuleScore {
  double score = 0.5;
  core::ClaimDecision decision = core::ClaimDecision::insufficient_evidence;
};

// Laplace-smoothed credibility-weighted vote: (S+1)/(S+N+2) with S and N the
// weighted support and negate counts. Throws Error(invalid_argument) unless
// the weights are positive and non-decreasing in tier.
RuleScore rule_aggregate(const FeatureVector& fv, const TierWeights& weights = kDefaultTierWeights);

// Claim-level scoring: the trained model when one is loaded, otherwise the
// rule.
class ClaimScorer {
 public:
  ClaimScorer() = default;
  explicit ClaimScorer(TierWeights weights) : weights_(weights) {}
  explicit ClaimScorer(GbdtModel model, TierWeights weights = kDefaultTierWeights);

  // Builds the verdict from evidence that already carries tiers. The
  // decision is insufficient_evidence iff nothing supports or negates the
  // claim; otherwise supported iff the probability is at least 0.5.
  core::ClaimVerdict score(const std::string& claim_id,
                           const std::vector<core::EvidenceItem>& evidence) const;

  bool has_model() const { return model_.has_value(); }
  const std::optional<GbdtModel>& model() const { return model_; }

 private:
  std::optional<GbdtModel> model_;
  TierWeights weights_ = kDefaultTierWeights;
};

enum class ArticleMode { main_claim, min_over_claims };

std::string_view to_string(ArticleMode mode);
ArticleMode article_mode_from_string(std::string_view s);  // throws Error(parse_failure)

struct ArticleDecision {
  core::ArticleVerdict verdict = core::ArticleVerdict::unverified;
  double probability = 0.5;
  friend bool operator==(const ArticleDecision&, const ArticleDecision&) = default;
};

// main_claim: the verdict whose claim id is `main_claim_id` (or, when empty,
// the one ending in ":main", or the only one) maps supported->real,
// refuted->fake, insufficient->unverified.
// min_over_claims: probability is the minimum over decided claims; fake iff
// it is below 0.5 and some claim is refuted; all insufficient gives
// (unverified, 0.5).
// Throws Error(empty_verdicts), or Error(not_found) without a main claim.
ArticleDecision decide_article(const std::vector<core::ClaimVerdict>& verdicts, ArticleMode mode,
                               const std::string& main_claim_id = "");

}  // namespace claimcheck::aggregation
