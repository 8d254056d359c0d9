#include "claimcheck/extraction/extractor.hpp"

#include <unordered_set>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::extraction {

using core::Claim;
using core::NewsArticle;
using llm::TemplateName;

bool self_containedness_check(std::string_view claim_text) {
  if (core::starts_with_bare_pronoun(claim_text)) return false;
  return core::whitespace_tokens(claim_text).size() >= 4;
}

std::string article_content(const NewsArticle& article) {
  const auto title = core::trim(article.title);
  if (title.empty()) return article.body;
  return std::string(title) + "\n" + article.body;
}

std::string main_claim_id(const std::string& article_id) { return article_id + ":main"; }

std::string key_claim_id(const std::string& article_id, int ordinal) {
  return article_id + ":key:" + std::to_string(ordinal);
}

std::vector<std::string> dedup_claim_texts(const std::vector<std::string>& texts) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : texts) {
    std::string text(core::trim(raw));
    if (text.empty()) continue;
    if (seen.insert(core::casefold(text)).second) out.push_back(std::move(text));
  }
  return out;
}

namespace {

void require_body(const NewsArticle& article) {
  if (core::trim(article.body).empty()) {
    throw Error(Errc::empty_article, "article " + article.id + " has an empty body");
  }
}

}  // namespace


core::Claim ClaimExtractor::extract_main_claim(const NewsArticle& article) {
  require_body(article);
  const std::string prompt =
      llm::render(llm::prompt_template(TemplateName::main_claim),
                  {{"content", article_content(article)}});

  auto response = gateway_.ask(TemplateName::main_claim, prompt, options_.format_reasks);
  if (!response.parse_ok()) {
    throw Error(Errc::extraction_failure,
                "main claim for " + article.id + ": " + response.parse_error);
  }
  std::string text(core::trim(response.as<llm::MainClaimOutput>().key_claim));

  for (int i = 1; i <= options_.self_contained_reasks && !self_containedness_check(text); ++i) {
    const std::string follow_up = llm::reask_prompt(prompt, llm::kSelfContainedReaskNote, i);
    auto again = gateway_.ask(TemplateName::main_claim, follow_up, options_.format_reasks);
    if (!again.parse_ok()) break;
    std::string candidate(core::trim(again.as<llm::MainClaimOutput>().key_claim));
    if (!candidate.empty()) text = std::move(candidate);
  }
  if (text.empty()) {
    throw Error(Errc::extraction_failure, "main claim for " + article.id + " is empty");
  }
  return Claim{main_claim_id(article.id), article.id, std::move(text), core::Granularity::main, 0};
}

std::vector<Claim> ClaimExtractor::extract_key_claims(const NewsArticle& article) {
  require_body(article);
  const std::string prompt =
      llm::render(llm::prompt_template(TemplateName::key_claims),
                  {{"content", article_content(article)}});

  auto response = gateway_.ask(TemplateName::key_claims, prompt, options_.format_reasks);
  if (!response.parse_ok()) {
    throw Error(Errc::extraction_failure,
                "key claims for " + article.id + ": " + response.parse_error);
  }
  auto texts = dedup_claim_texts(response.as<llm::KeyClaimsOutput>().claims);
  if (texts.empty()) {
    throw Error(Errc::extraction_failure, "no key claims for " + article.id);
  }
  if (texts.size() > options_.max_key_claims) texts.resize(options_.max_key_claims);

  std::vector<Claim> claims;
  claims.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const int ordinal = static_cast<int>(i);
    claims.push_back(Claim{key_claim_id(article.id, ordinal), article.id, std::move(texts[i]),
                           core::Granularity::key, ordinal});
  }
  return claims;
}

}  // namespace claimcheck::extraction
