#pragma once

#include <memory>
#include <string>
#include <vector>

#include "claimcheck/core/types.hpp"
#include "claimcheck/llm/gateway.hpp"
#include "claimcheck/retrieval/backend.hpp"
#include "claimcheck/retrieval/policy.hpp"

namespace claimcheck::retrieval {

inline constexpr std::size_t kMaxQueries = 3;
inline constexpr std::size_t kDefaultMinRelevant = 8;

// 1..3 queries with ranks 0..k-1; repeated texts (trimmed, case-folded)
// collapse onto the first. Throws Error(generation_failure) when the model
// gives no usable query after `max_reasks` format re-asks.
std::vector<core::SearchQuery> generate_queries(const core::Claim& claim, llm::Gateway& gateway,
                                                int max_reasks = 2);

// Filters before truncating, so blocked hits never use up a result slot.
std::vector<core::SearchResult> execute_query(const core::SearchQuery& query,
                                              SearchBackend& backend, const FilterPolicy& policy,
                                              const core::Clock& clock = core::Timestamp::now);

struct PoolOptions {
  std::size_t min_relevant = kDefaultMinRelevant;
  core::Clock clock = core::Timestamp::now;
};

struct EvidencePool {
  std::vector<core::SearchResult> results;
  // Ranks of the queries that were sent, in order.
  std::vector<int> executed_ranks;
  // One message per failed (query, backend) call.
  std::vector<std::string> failures;
};

// Runs queries in rank order against every backend and stops once the pool
// holds min_relevant distinct results. Results are deduplicated by URL and
// then by (domain, case-folded title); the first occurrence wins. A failing
// call is recorded and skipped; the error propagates only when every call
// failed.
EvidencePool gather_evidence_pool(const core::Claim& claim,
                                  const std::vector<core::SearchQuery>& queries,
                                  const std::vector<std::shared_ptr<SearchBackend>>& backends,
                                  const FilterPolicy& policy, const PoolOptions& options = {});

}  // namespace claimcheck::retrieval
