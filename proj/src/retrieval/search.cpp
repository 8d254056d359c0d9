#include "claimcheck/retrieval/search.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::retrieval {

using core::SearchQuery;
using core::SearchResult;
using llm::TemplateName;

std::vector<SearchQuery> generate_queries(const core::Claim& claim, llm::Gateway& gateway,
                                          int max_reasks) {
  const std::string prompt =
      llm::render(llm::prompt_template(TemplateName::query_gen), {{"claim", claim.text}});
  const auto response = gateway.ask(TemplateName::query_gen, prompt, max_reasks);
  if (!response.parse_ok()) {
    throw Error(Errc::generation_failure,
                "queries for " + claim.id + ": " + response.parse_error);
  }
  std::vector<SearchQuery> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : response.as<llm::QueryOutput>().queries) {
    std::string text(core::trim(raw));
    if (text.empty() || !seen.insert(core::casefold(text)).second) continue;
    out.push_back(SearchQuery{claim.id, std::move(text), static_cast<int>(out.size())});
    if (out.size() == kMaxQueries) break;
  }
  if (out.empty()) throw Error(Errc::generation_failure, "no usable query for " + claim.id);
  return out;
}

std::vector<SearchResult> execute_query(const SearchQuery& query, SearchBackend& backend,
                                        const FilterPolicy& policy, const core::Clock& clock) {
  policy.validate();
  auto raw = backend.search(query.text, kMaxResultsPerQueryLimit);
  std::vector<SearchResult> out;
  const core::Timestamp now = clock();
  for (auto& r : raw) {
    if (policy.blocks(r)) continue;
    r.query_rank = query.rank;
    r.retrieved_at = now;
    out.push_back(std::move(r));
    if (out.size() == policy.max_results_per_query) break;
  }
  return out;
}

EvidencePool gather_evidence_pool(const core::Claim& claim,
                                  const std::vector<SearchQuery>& queries,
                                  const std::vector<std::shared_ptr<SearchBackend>>& backends,
                                  const FilterPolicy& policy, const PoolOptions& options) {
  std::vector<SearchQuery> ordered;
  for (const auto& q : queries) {
    if (q.claim_id == claim.id) ordered.push_back(q);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SearchQuery& a, const SearchQuery& b) { return a.rank < b.rank; });
  if (ordered.size() > kMaxQueries) ordered.resize(kMaxQueries);

  EvidencePool pool;
  std::set<std::string> urls;
  std::set<std::pair<std::string, std::string>> titles;
  std::exception_ptr first_error;
  std::size_t successes = 0;

  for (const auto& q : ordered) {
    if (pool.results.size() >= options.min_relevant) break;
    pool.executed_ranks.push_back(q.rank);
    for (const auto& backend : backends) {
      std::vector<SearchResult> hits;
      try {
        hits = execute_query(q, *backend, policy, options.clock);
        ++successes;
      } catch (const Error& e) {
        if (e.code() == Errc::invalid_argument) throw;
        if (!first_error) first_error = std::current_exception();
        pool.failures.push_back(backend->name() + " [rank " + std::to_string(q.rank) +
                                "]: " + e.what());
        continue;
      }
      for (auto& r : hits) {
        if (urls.count(r.url)) continue;
        const std::string folded = core::casefold(core::trim(r.title));
        if (!folded.empty() && titles.count({r.domain, folded})) continue;
        urls.insert(r.url);
        if (!folded.empty()) titles.insert({r.domain, folded});
        pool.results.push_back(std::move(r));
      }
    }
  }
  if (successes == 0 && first_error) std::rethrow_exception(first_error);
  return pool;
}

}  // namespace claimcheck::retrieval
