#include "claimcheck/verification/verifier.hpp"

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/parallel.hpp"
#include "claimcheck/core/report.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::verification {

using core::Confidence;
using core::EvidenceItem;
using core::VerdictLabel;
using llm::TemplateName;

std::string search_result_text(const core::SearchResult& result, std::size_t token_budget) {
  return core::truncate_tokens("Title: " + result.title + "\n" + result.snippet_or_body,
                               token_budget);
}

namespace {

llm::Bindings bindings_for(const core::Claim& claim, const core::SearchResult& result,
                           std::size_t budget) {
  return {{"search_result", search_result_text(result, budget)}, {"claim", claim.text}};
}

}  // namespace

EvidenceItem Verifier::judge(const core::Claim& claim, const core::SearchResult& result) {
  EvidenceItem item;
  item.claim_id = claim.id;
  item.result = result;
  item.label = VerdictLabel::baseless;
  item.confidence = Confidence::low;
  item.rationale = std::string(kUnparseableRationale);

  const std::string prompt =
      llm::render(llm::prompt_template(TemplateName::verify),
                  bindings_for(claim, result, options_.result_token_budget));
  try {
    const auto response = gateway_.ask(TemplateName::verify, prompt, options_.max_reasks);
    if (response.parse_ok()) {
      const auto& out = response.as<llm::VerifyOutput>();
      item.label = out.label;
      item.confidence = out.confidence;
      item.rationale = out.rationale;
    }
  } catch (const std::exception&) {
    // Transport exhaustion or a replay miss: keep the fallback verdict.
  }
  return item;
}

EvidenceItem Verifier::verify_pair(const core::Claim& claim, const core::SearchResult& result) {
  return judge(claim, result);
}

Relevance Verifier::relevance_check(const core::Claim& claim, const core::SearchResult& result) {
  const std::string prompt =
      llm::render(llm::prompt_template(TemplateName::relevance),
                  bindings_for(claim, result, options_.result_token_budget));
  try {
    const auto response = gateway_.ask(TemplateName::relevance, prompt, 0);
    if (response.parse_ok()) {
      const auto& out = response.as<llm::RelevanceOutput>();
      return Relevance{out.same_story, out.related};
    }
  } catch (const std::exception&) {
  }
  return Relevance{false, true};
}

std::vector<EvidenceItem> Verifier::verify_claim(const core::Claim& claim,
                                                 const std::vector<core::SearchResult>& pool) {
  std::vector<EvidenceItem> items(pool.size());
  const auto width = static_cast<std::size_t>(std::max(1, gateway_.options().max_in_flight));
  core::bounded_parallel_for(pool.size(), width, [&](std::size_t i) {
    if (options_.prescreen && !relevance_check(claim, pool[i]).related) {
      items[i] = EvidenceItem{claim.id, pool[i], VerdictLabel::baseless, Confidence::high,
                              std::string(kPrescreenRationale), std::nullopt};
      return;
    }
    items[i] = judge(claim, pool[i]);
  });
  core::sort_evidence(items);
  return items;
}

}  // namespace claimcheck::verification
