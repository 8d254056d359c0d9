#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/core/types.hpp"

namespace claimcheck::aggregation {

inline constexpr std::size_t kCountDims = 15;
inline constexpr std::size_t kFeatureDims = 19;

// Tier-by-label evidence counts. counts[(tier-1)*3 + label_index], then
// per-label totals, then the number of results.
struct FeatureVector {
  std::array<int, kCountDims> counts{};
  std::array<int, 3> totals{};
  int n_results = 0;

  static std::size_t index(int tier, core::VerdictLabel label);

  int count(int tier, core::VerdictLabel label) const { return counts[index(tier, label)]; }
  // Adds `n` items at (tier, label), keeping totals and n_results in step.
  void add(int tier, core::VerdictLabel label, int n = 1);

  // counts, totals, n_results as doubles: 19 dimensions.
  std::vector<double> dense() const;

  // Throws Error(invalid_argument) if totals or n_results disagree with counts.
  void check() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Items without a source_tier are counted at the default tier.
FeatureVector featurize(const std::vector<core::EvidenceItem>& evidence);
FeatureVector featurize(const std::map<core::TierLabel, int>& evidence_counts);

std::map<core::TierLabel, int> evidence_counts(const std::vector<core::EvidenceItem>& evidence);

void to_json(nlohmann::json& j, const FeatureVector& fv);
// Accepts the object form or a flat array of 19 numbers.
void from_json(const nlohmann::json& j, FeatureVector& fv);

// Optional raw-domain features: for each of the top-K domains, its support,
// negate and baseless counts, appended after the 19 base dimensions.
class DomainEncoder {
 public:
  DomainEncoder() = default;
  explicit DomainEncoder(std::vector<std::string> domains) : domains_(std::move(domains)) {}

  // Most frequent domains across the evidence lists, ties by name.
  static DomainEncoder top_k(const std::vector<std::vector<core::EvidenceItem>>& evidence_lists,
                             std::size_t k);

  std::size_t dims() const { return kFeatureDims + 3 * domains_.size(); }
  std::vector<double> encode(const std::vector<core::EvidenceItem>& evidence) const;
  const std::vector<std::string>& domains() const { return domains_; }

 private:
  std::vector<std::string> domains_;
};

}  // namespace claimcheck::aggregation
