#pragma once

#include <random>
#include <vector>

#include "claimcheck/aggregation/features.hpp"

namespace claimcheck::testing {

// Rows labelled 1 iff tier-5 support count exceeds tier-5 negate count. Both
// counts are drawn from 0..3; every other cell carries 0..2 items of noise.
inline std::vector<std::pair<aggregation::FeatureVector, int>> tier5_rule_rows(
    std::size_t n, std::uint64_t seed) {
  using core::VerdictLabel;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> decisive(0, 3);
  std::uniform_int_distribution<int> noise(0, 2);
  std::vector<std::pair<aggregation::FeatureVector, int>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    aggregation::FeatureVector fv;
    const int s5 = decisive(rng);
    const int n5 = decisive(rng);
    fv.add(5, VerdictLabel::support, s5);
    fv.add(5, VerdictLabel::negate, n5);
    fv.add(5, VerdictLabel::baseless, noise(rng));
    for (int tier = 1; tier <= 4; ++tier) {
      for (VerdictLabel l : core::kAllLabels) fv.add(tier, l, noise(rng));
    }
    rows.emplace_back(fv, s5 > n5 ? 1 : 0);
  }
  return rows;
}

}  // namespace claimcheck::testing
