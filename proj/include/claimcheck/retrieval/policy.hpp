#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/core/types.hpp"

namespace claimcheck::retrieval {

inline constexpr std::size_t kMaxResultsPerQueryLimit = 50;

// Keeps fact-checking outlets out of evidence pools. Default-constructed
// policies carry the seeded block lists.
struct FilterPolicy {
  std::set<std::string> blocked_domains{"politifact.com", "snopes.com", "factcheck.org",
                                        "fullfact.org"};
  std::vector<std::string> blocked_url_substrings{"/fact-check", "/factcheck"};
  std::size_t max_results_per_query = 10;

  static FilterPolicy permissive();

  // Throws Error(invalid_argument) unless 0 < max_results_per_query <= 50.
  void validate() const;

  // Blocked when the registrable domain of either the result's domain field
  // or its URL is listed, or the case-folded URL contains a blocked substring.
  bool blocks(const core::SearchResult& result) const;

  // Missing keys keep their defaults.
  static FilterPolicy from_json(const nlohmann::json& j);
};

}  // namespace claimcheck::retrieval
