#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "claimcheck/core/types.hpp"

namespace claimcheck::aggregation {

inline constexpr int kDefaultTier = 3;

// Publisher credibility, keyed by registrable domain. Lookup is total.
class CredibilityRegistry {
 public:
  CredibilityRegistry() = default;
  // Throws Error(invalid_argument) on a tier outside 1..5.
  explicit CredibilityRegistry(std::map<std::string, int> entries, int default_tier = kDefaultTier);

  // "domain<TAB>tier" lines; blank lines and '#' comments are skipped.
  // Throws Error(parse_failure) naming the offending line.
  static CredibilityRegistry parse_tsv(std::string_view text, int default_tier = kDefaultTier);
  // Throws Error(io_error) when the file cannot be read.
  static CredibilityRegistry load_tsv(const std::string& path, int default_tier = kDefaultTier);

  // Accepts a raw host or URL domain; it is normalized first.
  int tier(std::string_view domain) const;
  int default_tier() const { return default_tier_; }
  const std::map<std::string, int>& entries() const { return entries_; }

  nlohmann::json to_json() const;

 private:
  std::map<std::string, int> entries_;
  int default_tier_ = kDefaultTier;
};

// Copies `evidence` with every source_tier set from the registry.
std::vector<core::EvidenceItem> assign_tiers(std::vector<core::EvidenceItem> evidence,
                                             const CredibilityRegistry& registry);

}  // namespace claimcheck::aggregation
