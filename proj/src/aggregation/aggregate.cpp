#include "claimcheck/aggregation/aggregate.hpp"

#include <algorithm>
#include <limits>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::aggregation {

using core::ArticleVerdict;
using core::ClaimDecision;
using core::VerdictLabel;

RuleScore rule_aggregate(const FeatureVector& fv, const TierWeights& weights) {
  for (std::size_t t = 0; t < weights.size(); ++t) {
    if (!(weights[t] > 0.0) || (t > 0 && weights[t] < weights[t - 1])) {
      throw Error(Errc::invalid_argument, "tier weights must be positive and non-decreasing");
    }
  }
  double s = 0.0, n = 0.0;
  for (int tier = core::kMinTier; tier <= core::kMaxTier; ++tier) {
    const double w = weights[static_cast<std::size_t>(tier - 1)];
    s += w * fv.count(tier, VerdictLabel::support);
    n += w * fv.count(tier, VerdictLabel::negate);
  }
  RuleScore out;
  out.score = (s + 1.0) / (s + n + 2.0);
  if (s == 0.0 && n == 0.0) {
    out.decision = ClaimDecision::insufficient_evidence;
  } else {
    out.decision = out.score >= 0.5 ? ClaimDecision::supported : ClaimDecision::refuted;
  }
  return out;
}

ClaimScorer::ClaimScorer(GbdtModel model, TierWeights weights)
    : model_(std::move(model)), weights_(weights) {}

core::ClaimVerdict ClaimScorer::score(const std::string& claim_id,
                                      const std::vector<core::EvidenceItem>& evidence) const {
  core::ClaimVerdict v;
  v.claim_id = claim_id;
  v.evidence_counts = evidence_counts(evidence);
  const FeatureVector fv = featurize(evidence);
  const bool decisive = fv.totals[core::label_index(VerdictLabel::support)] > 0 ||
                        fv.totals[core::label_index(VerdictLabel::negate)] > 0;
  if (model_) {
    const auto x = model_->domains.empty() ? fv.dense()
                                           : DomainEncoder(model_->domains).encode(evidence);
    v.truth_probability = model_->predict(x);
  } else {
    v.truth_probability = rule_aggregate(fv, weights_).score;
  }
  if (!decisive) {
    v.decision = ClaimDecision::insufficient_evidence;
  } else {
    v.decision = v.truth_probability >= 0.5 ? ClaimDecision::supported : ClaimDecision::refuted;
  }
  return v;
}

std::string_view to_string(ArticleMode mode) {
  return mode == ArticleMode::main_claim ? "main_claim" : "min_over_claims";
}

ArticleMode article_mode_from_string(std::string_view s) {
  if (s == "main_claim" || s == "main") return ArticleMode::main_claim;
  if (s == "min_over_claims" || s == "all") return ArticleMode::min_over_claims;
  throw Error(Errc::parse_failure, "unknown aggregation mode: " + std::string(s));
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

ArticleVerdict article_verdict_for(ClaimDecision d) {
  switch (d) {
    case ClaimDecision::supported: return ArticleVerdict::real;
    case ClaimDecision::refuted: return ArticleVerdict::fake;
    case ClaimDecision::insufficient_evidence: return ArticleVerdict::unverified;
  }
  return ArticleVerdict::unverified;
}

}  // namespace

ArticleDecision decide_article(const std::vector<core::ClaimVerdict>& verdicts, ArticleMode mode,
                               const std::string& main_claim_id) {
  if (verdicts.empty()) throw Error(Errc::empty_verdicts, "no claim verdicts to aggregate");

  if (mode == ArticleMode::main_claim) {
    const core::ClaimVerdict* main = nullptr;
    for (const auto& v : verdicts) {
      if (main_claim_id.empty() ? ends_with(v.claim_id, ":main") : v.claim_id == main_claim_id) {
        main = &v;
        break;
      }
    }
    if (!main && main_claim_id.empty() && verdicts.size() == 1) main = &verdicts.front();
    if (!main) throw Error(Errc::not_found, "no verdict for the main claim");
    return ArticleDecision{article_verdict_for(main->decision), main->truth_probability};
  }

  double lowest = std::numeric_limits<double>::infinity();
  bool any_refuted = false;
  for (const auto& v : verdicts) {
    if (v.decision == ClaimDecision::insufficient_evidence) continue;
    lowest = std::min(lowest, v.truth_probability);
    any_refuted = any_refuted || v.decision == ClaimDecision::refuted;
  }
  if (lowest == std::numeric_limits<double>::infinity()) {
    return ArticleDecision{ArticleVerdict::unverified, 0.5};
  }
  const bool fake = lowest < 0.5 && any_refuted;
  return ArticleDecision{fake ? ArticleVerdict::fake : ArticleVerdict::real, lowest};
}

}  // namespace claimcheck::aggregation
