#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/aggregation/aggregate.hpp"
#include "claimcheck/aggregation/registry.hpp"
#include "claimcheck/extraction/extractor.hpp"
#include "claimcheck/llm/gateway.hpp"
#include "claimcheck/retrieval/backend.hpp"
#include "claimcheck/retrieval/policy.hpp"
#include "claimcheck/retrieval/search.hpp"
#include "claimcheck/service/job.hpp"
#include "claimcheck/verification/verifier.hpp"

namespace claimcheck::service {

inline constexpr std::string_view kPipelineVersion = "claimcheck/0.1.0";

using StageFn = std::function<void(JobState)>;

// What the service needs from a pipeline. Tests substitute stubs.
class JobRunner {
 public:
  virtual ~JobRunner() = default;
  // Calls `advance` with each stage before starting it.
  virtual core::VerificationReport run(const core::NewsArticle& article, const StageFn& advance) = 0;
  // Fresh queries, pool and verdicts for one claim; the rest of the report is
  // kept. Throws Error(not_found) for an unknown claim.
  virtual core::VerificationReport rerun_claim(const core::VerificationReport& report,
                                               const std::string& claim_id) = 0;
  // Recomputes every claim verdict and the article verdict from the
  // evidence labels as they stand.
  virtual core::VerificationReport rescore(core::VerificationReport report) const = 0;
  virtual nlohmann::json registry_json() const = 0;
};

struct PipelineOptions {
  // main_claim verifies the main claim only; min_over_claims also extracts
  // and verifies the key claims.
  aggregation::ArticleMode mode = aggregation::ArticleMode::main_claim;
  bool extraction_only = false;
  int query_reasks = 2;
  extraction::ExtractionOptions extraction;
  verification::VerifierOptions verifier;
  retrieval::PoolOptions pool;
  std::string pipeline_version{kPipelineVersion};
};

struct ClaimRun {
  std::vector<core::SearchQuery> queries;
  std::vector<core::EvidenceItem> evidence;  // tiers attached, sorted
  std::vector<std::string> failures;         // failed backend calls
};

class Pipeline final : public JobRunner {
 public:
  Pipeline(std::shared_ptr<llm::Gateway> gateway,
           std::vector<std::shared_ptr<retrieval::SearchBackend>> backends,
           retrieval::FilterPolicy policy, aggregation::CredibilityRegistry registry,
           aggregation::ClaimScorer scorer, PipelineOptions options = {});

  core::VerificationReport run(const core::NewsArticle& article,
                               const StageFn& advance = {}) override;
  core::VerificationReport rerun_claim(const core::VerificationReport& report,
                                       const std::string& claim_id) override;
  core::VerificationReport rescore(core::VerificationReport report) const override;
  nlohmann::json registry_json() const override { return registry_.to_json(); }

  std::vector<core::Claim> extract(const core::NewsArticle& article);
  ClaimRun search_and_verify(const core::Claim& claim);

  const PipelineOptions& options() const { return options_; }
  const aggregation::CredibilityRegistry& registry() const { return registry_; }

 private:
  std::vector<core::SearchQuery> queries_for(const core::Claim& claim);
  retrieval::EvidencePool pool_for(const core::Claim& claim,
                                   const std::vector<core::SearchQuery>& queries);
  std::vector<core::EvidenceItem> judge(const core::Claim& claim,
                                        const std::vector<core::SearchResult>& pool);

  std::shared_ptr<llm::Gateway> gateway_;
  std::vector<std::shared_ptr<retrieval::SearchBackend>> backends_;
  retrieval::FilterPolicy policy_;
  aggregation::CredibilityRegistry registry_;
  aggregation::ClaimScorer scorer_;
  PipelineOptions options_;
};

}  // namespace claimcheck::service
