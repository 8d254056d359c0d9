#include "claimcheck/retrieval/policy.hpp"

#include "claimcheck/core/domain.hpp"
#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::retrieval {

FilterPolicy FilterPolicy::permissive() {
  FilterPolicy p;
  p.blocked_domains.clear();
  p.blocked_url_substrings.clear();
  return p;
}

void FilterPolicy::validate() const {
  if (max_results_per_query == 0 || max_results_per_query > kMaxResultsPerQueryLimit) {
    throw Error(Errc::invalid_argument, "max_results_per_query must be in 1..50, got " +
                                            std::to_string(max_results_per_query));
  }
}

bool FilterPolicy::blocks(const core::SearchResult& result) const {
  if (!blocked_domains.empty()) {
    // Entries are compared in normalized form so "www.Snopes.com" still matches.
    for (const std::string& d : {core::registrable_domain(result.domain),
                                 core::domain_of_url(result.url)}) {
      if (d.empty()) continue;
      if (blocked_domains.count(d)) return true;
      for (const auto& b : blocked_domains) {
        if (core::registrable_domain(b) == d) return true;
      }
    }
  }
  const std::string url = core::casefold(result.url);
  for (const auto& s : blocked_url_substrings) {
    if (!s.empty() && url.find(core::casefold(s)) != std::string::npos) return true;
  }
  return false;
}

FilterPolicy FilterPolicy::from_json(const nlohmann::json& j) {
  FilterPolicy p;
  try {
    if (j.contains("blocked_domains")) {
      p.blocked_domains.clear();
      for (const auto& d : j.at("blocked_domains")) {
        p.blocked_domains.insert(core::registrable_domain(d.get<std::string>()));
      }
    }
    if (j.contains("blocked_url_substrings")) {
      p.blocked_url_substrings = j.at("blocked_url_substrings").get<std::vector<std::string>>();
    }
    if (j.contains("max_results_per_query")) {
      p.max_results_per_query = j.at("max_results_per_query").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("bad policy config: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace claimcheck::retrieval
