#include "claimcheck/service/pipeline.hpp"

#include <algorithm>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/report.hpp"

namespace claimcheck::service {

using core::VerificationReport;

Pipeline::Pipeline(std::shared_ptr<llm::Gateway> gateway,
                   std::vector<std::shared_ptr<retrieval::SearchBackend>> backends,
                   retrieval::FilterPolicy policy, aggregation::CredibilityRegistry registry,
                   aggregation::ClaimScorer scorer, PipelineOptions options)
    : gateway_(std::move(gateway)),
      backends_(std::move(backends)),
      policy_(std::move(policy)),
      registry_(std::move(registry)),
      scorer_(std::move(scorer)),
      options_(std::move(options)) {
  if (!gateway_) throw Error(Errc::invalid_argument, "pipeline needs a gateway");
  policy_.validate();
  if (!options_.extraction_only && backends_.empty()) {
    throw Error(Errc::invalid_argument, "pipeline needs at least one search backend");
  }
}

std::vector<core::Claim> Pipeline::extract(const core::NewsArticle& article) {
  extraction::ClaimExtractor extractor(*gateway_, options_.extraction);
  std::vector<core::Claim> claims{extractor.extract_main_claim(article)};
  if (options_.mode == aggregation::ArticleMode::min_over_claims) {
    for (auto& c : extractor.extract_key_claims(article)) claims.push_back(std::move(c));
  }
  return claims;
}

std::vector<core::SearchQuery> Pipeline::queries_for(const core::Claim& claim) {
  return retrieval::generate_queries(claim, *gateway_, options_.query_reasks);
}

retrieval::EvidencePool Pipeline::pool_for(const core::Claim& claim,
                                           const std::vector<core::SearchQuery>& queries) {
  return retrieval::gather_evidence_pool(claim, queries, backends_, policy_, options_.pool);
}

std::vector<core::EvidenceItem> Pipeline::judge(const core::Claim& claim,
                                                const std::vector<core::SearchResult>& pool) {
  verification::Verifier verifier(*gateway_, options_.verifier);
  return aggregation::assign_tiers(verifier.verify_claim(claim, pool), registry_);
}

ClaimRun Pipeline::search_and_verify(const core::Claim& claim) {
  ClaimRun run;
  run.queries = queries_for(claim);
  auto pool = pool_for(claim, run.queries);
  run.failures = std::move(pool.failures);
  run.evidence = judge(claim, pool.results);
  return run;
}

VerificationReport Pipeline::run(const core::NewsArticle& article, const StageFn& advance) {
  auto stage = [&](JobState s) {
    if (advance) advance(s);
  };

  VerificationReport report;
  report.article = article;
  report.pipeline_version = options_.pipeline_version;
  report.extraction_only = options_.extraction_only;

  stage(JobState::extracting);
  report.claims = extract(article);

  if (!options_.extraction_only) {
    // Stages run across all claims so the job state reflects real progress.
    stage(JobState::searching);
    std::vector<std::vector<core::SearchResult>> pools;
    for (const auto& claim : report.claims) {
      auto queries = queries_for(claim);
      pools.push_back(pool_for(claim, queries).results);
      report.queries.insert(report.queries.end(), queries.begin(), queries.end());
    }
    stage(JobState::verifying);
    for (std::size_t i = 0; i < report.claims.size(); ++i) {
      auto items = judge(report.claims[i], pools[i]);
      report.evidence.insert(report.evidence.end(), items.begin(), items.end());
    }
  }

  stage(JobState::aggregating);
  return rescore(std::move(report));
}

VerificationReport Pipeline::rescore(VerificationReport report) const {
  report.claim_verdicts.clear();
  for (const auto& claim : report.claims) {
    std::vector<core::EvidenceItem> mine;
    for (const auto& e : report.evidence) {
      if (e.claim_id == claim.id) mine.push_back(e);
    }
    report.claim_verdicts.push_back(scorer_.score(claim.id, mine));
  }
  if (!report.claim_verdicts.empty()) {
    std::string main_id;
    for (const auto& c : report.claims) {
      if (c.granularity == core::Granularity::main) main_id = c.id;
    }
    const auto decision = aggregation::decide_article(report.claim_verdicts, options_.mode, main_id);
    report.article_verdict = decision.verdict;
    report.article_probability = decision.probability;
  }
  return core::seal(std::move(report));
}

VerificationReport Pipeline::rerun_claim(const VerificationReport& report,
                                         const std::string& claim_id) {
  auto it = std::find_if(report.claims.begin(), report.claims.end(),
                         [&](const core::Claim& c) { return c.id == claim_id; });
  if (it == report.claims.end()) throw Error(Errc::not_found, "unknown claim " + claim_id);
  ClaimRun fresh = search_and_verify(*it);

  VerificationReport next = report;
  std::erase_if(next.queries, [&](const core::SearchQuery& q) { return q.claim_id == claim_id; });
  std::erase_if(next.evidence, [&](const core::EvidenceItem& e) { return e.claim_id == claim_id; });
  next.queries.insert(next.queries.end(), fresh.queries.begin(), fresh.queries.end());
  next.evidence.insert(next.evidence.end(), fresh.evidence.begin(), fresh.evidence.end());
  return rescore(std::move(next));
}

}  // namespace claimcheck::service
