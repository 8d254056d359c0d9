#include <algorithm>
#include <fstream>
#include <iterator>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "claimcheck/core/text.hpp"
#include "claimcheck/llm/provider.hpp"
#include "claimcheck/verification/verifier.hpp"
#include "test_support.hpp"

namespace claimcheck {
namespace {

using namespace verification;
using core::Confidence;
using core::SearchResult;
using core::VerdictLabel;
using llm::ChatRequest;
using llm::FunctionProvider;
using llm::Gateway;
using llm::TemplateName;
using testing::make_result;

llm::GatewayOptions fast(int in_flight = 4) {
  llm::GatewayOptions o;
  o.retry_backoff = std::chrono::milliseconds(0);
  o.max_in_flight = in_flight;
  return o;
}

const core::Claim kClaim{"a:key:0", "a",
                         "A study conducted by Cleveland Clinic suggested that choline could make "
                         "the blood more prone to clotting.",
                         core::Granularity::key, 0};

TEST(SearchResultTextTest, TitleThenBodyTruncatedHeadFirst) {
  const auto r = make_result("r", "https://x.com/a", "Budget passes",
                             "The council approved the budget on May 2.");
  EXPECT_EQ(search_result_text(r, 3000),
            "Title: Budget passes\nThe council approved the budget on May 2.");
  EXPECT_EQ(search_result_text(r, 4), "Title: Budget passes\nThe");
}

TEST(SearchResultTextTest, PromptMatchesGoldenFile) {
  std::string seen;
  Gateway gw(std::make_shared<FunctionProvider>([&](const ChatRequest& r) {
               seen = r.prompt;
               return std::string(R"({"support_or_negate_or_baseless": "support", "confidence": "high", "rationale": "same event"})");
             }),
             fast());
  Verifier v(gw);
  const core::Claim claim{"b:main", "b", "The city council approved the budget on May 2.",
                          core::Granularity::main, 0};
  v.verify_pair(claim, make_result("r", "https://x.com/a", "Budget passes",
                                   "The council approved the budget on May 2."));
  std::ifstream in(testing::fixture_path("verify_prompt_golden.txt"));
  const std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(seen, golden);
}

TEST(VerifyPairTest, MapsModelOutput) {
  Gateway gw(std::make_shared<FunctionProvider>([](const ChatRequest&) {
               return std::string(
                   R"({"support_or_negate_or_baseless": "support", "confidence": "high",
                       "rationale": "The result describes the 2017 Cleveland Clinic TMAO finding."})");
             }),
             fast());
  Verifier v(gw);
  const auto e = v.verify_pair(kClaim, make_result("ap", "https://apnews.com/eggs",
                                                   "Study from 2017 misrepresented", "TMAO"));
  EXPECT_EQ(e.label, VerdictLabel::support);
  EXPECT_EQ(e.confidence, Confidence::high);
  EXPECT_NE(e.rationale.find("TMAO"), std::string::npos);
  EXPECT_EQ(e.claim_id, kClaim.id);
  EXPECT_EQ(e.result.id, "ap");
  EXPECT_FALSE(e.source_tier.has_value());
}

TEST(VerifyPairTest, MalformedTwiceThenFallback) {
  std::atomic<int> calls{0};
  Gateway gw(std::make_shared<FunctionProvider>([&](const ChatRequest&) {
               ++calls;
               return std::string(R"({"support_or_negate_or_baseless": "maybe"})");
             }),
             fast());
  Verifier v(gw);
  const auto e = v.verify_pair(kClaim, make_result("r", "https://reuters.com/x", "Eggs", "x"));
  EXPECT_EQ(e.label, VerdictLabel::baseless);
  EXPECT_EQ(e.confidence, Confidence::low);
  EXPECT_EQ(e.rationale, kUnparseableRationale);
  EXPECT_EQ(calls.load(), 3);
}

TEST(VerifyPairTest, TransportFailureFallsBack) {
  Gateway gw(std::make_shared<llm::ReplayProvider>(llm::Transcript{}), fast());
  Verifier v(gw);
  const auto e = v.verify_pair(kClaim, make_result("r", "https://reuters.com/x", "Eggs", "x"));
  EXPECT_EQ(e.label, VerdictLabel::baseless);
  EXPECT_EQ(e.rationale, kUnparseableRationale);
}

TEST(RelevanceTest, YesNoAndFailOpen) {
  auto reply = std::make_shared<std::string>();
  Gateway gw(std::make_shared<FunctionProvider>([reply](const ChatRequest&) { return *reply; }),
             fast());
  Verifier v(gw);
  const auto r = make_result("r", "https://x.com/a", "t", "b");
  *reply = R"({"about_the_same_news_story": "yes", "contains_related_content": "yes"})";
  EXPECT_EQ(v.relevance_check(kClaim, r), (Relevance{true, true}));
  *reply = R"({"about_the_same_news_story": "no", "contains_related_content": "no"})";
  EXPECT_EQ(v.relevance_check(kClaim, r), (Relevance{false, false}));
  *reply = "not json at all";
  EXPECT_EQ(v.relevance_check(kClaim, r), (Relevance{false, true}));
}

TEST(PrescreenTest, UnrelatedSkipsVerifyAndBrokenFailsOpen) {
  std::mutex m;
  std::map<TemplateName, int> calls;
  Gateway gw(std::make_shared<FunctionProvider>([&](const ChatRequest& req) -> std::string {
               std::lock_guard lock(m);
               ++calls[req.template_name];
               if (req.template_name == TemplateName::relevance) {
                 if (req.prompt.find("unrelated-doc") != std::string::npos) {
                   return R"({"about_the_same_news_story": "no", "contains_related_content": "no"})";
                 }
                 return "{broken";
               }
               return R"({"support_or_negate_or_baseless": "negate", "confidence": "medium", "rationale": "contradicts"})";
             }),
             fast());
  Verifier v(gw, VerifierOptions{2, 3000, true});
  const auto items = v.verify_claim(
      kClaim, {make_result("u", "https://a.com/1", "unrelated-doc", "sports"),
               make_result("k", "https://b.com/2", "eggs", "choline does not cause clots")});
  ASSERT_EQ(items.size(), 2u);
  const auto& skipped = items[0].result.id == "u" ? items[0] : items[1];
  const auto& judged = items[0].result.id == "u" ? items[1] : items[0];
  EXPECT_EQ(skipped.label, VerdictLabel::baseless);
  EXPECT_EQ(skipped.confidence, Confidence::high);
  EXPECT_EQ(skipped.rationale, kPrescreenRationale);
  EXPECT_EQ(judged.label, VerdictLabel::negate);
  EXPECT_EQ(calls[TemplateName::relevance], 2);
  EXPECT_EQ(calls[TemplateName::verify], 1);
}

TEST(VerifyClaimTest, EmptyPoolAndSingleContradiction) {
  std::atomic<int> calls{0};
  Gateway gw(std::make_shared<FunctionProvider>([&](const ChatRequest&) {
               ++calls;
               return std::string(
                   R"({"support_or_negate_or_baseless": "negate", "confidence": "high", "rationale": "The study found no link."})");
             }),
             fast());
  Verifier v(gw);
  EXPECT_TRUE(v.verify_claim(kClaim, {}).empty());
  EXPECT_EQ(calls.load(), 0);
  const auto items =
      v.verify_claim(kClaim, {make_result("n", "https://nih.gov/x", "No link", "no link found")});
  ASSERT_EQ(items.size(), 1u);
  EXPECT_EQ(items[0].label, VerdictLabel::negate);
}

// Label chosen by a hash of the result id so answers do not depend on call
// order; the output must be identical under any pool permutation and any
// in-flight width.
std::string scripted_verdict(const ChatRequest& req) {
  const auto digit = core::sha256_hex(req.prompt).back();
  if (digit < '6') return R"({"support_or_negate_or_baseless": "baseless", "confidence": "low", "rationale": ""})";
  if (digit < 'b') return R"({"support_or_negate_or_baseless": "support", "confidence": "high", "rationale": "matches"})";
  if (digit < 'e') return R"({"support_or_negate_or_baseless": "negate", "confidence": "medium", "rationale": "conflicts"})";
  return "garbled";
}

TEST(VerifyClaimTest, PermutationAndConcurrencyInvariant) {
  std::vector<SearchResult> pool;
  for (int i = 0; i < 30; ++i) {
    pool.push_back(make_result("r" + std::to_string(i), "https://site" + std::to_string(i % 7) +
                                                            ".com/" + std::to_string(i),
                               "title " + std::to_string(i), "body " + std::to_string(i)));
  }
  std::vector<core::EvidenceItem> reference;
  {
    Gateway gw(std::make_shared<FunctionProvider>(scripted_verdict), fast(1));
    reference = Verifier(gw).verify_claim(kClaim, pool);
  }
  ASSERT_EQ(reference.size(), pool.size());
  for (const auto& e : reference) {
    if (e.label != VerdictLabel::baseless) EXPECT_FALSE(core::trim(e.rationale).empty());
  }
  std::mt19937 rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    std::shuffle(pool.begin(), pool.end(), rng);
    Gateway gw(std::make_shared<FunctionProvider>(scripted_verdict), fast(1 + trial));
    EXPECT_EQ(Verifier(gw).verify_claim(kClaim, pool), reference);
  }
}

}  // namespace
}  // namespace claimcheck
