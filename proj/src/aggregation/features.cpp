#include "claimcheck/aggregation/features.hpp"

#include <algorithm>
#include <numeric>

#include "claimcheck/aggregation/registry.hpp"
#include "claimcheck/core/errors.hpp"

namespace claimcheck::aggregation {

using core::VerdictLabel;

std::size_t FeatureVector::index(int tier, VerdictLabel label) {
  if (tier < core::kMinTier || tier > core::kMaxTier) {
    throw Error(Errc::invalid_argument, "tier " + std::to_string(tier) + " outside 1..5");
  }
  return static_cast<std::size_t>((tier - 1) * 3 + core::label_index(label));
}

void FeatureVector::add(int tier, VerdictLabel label, int n) {
  counts[index(tier, label)] += n;
  totals[core::label_index(label)] += n;
  n_results += n;
}

std::vector<double> FeatureVector::dense() const {
  std::vector<double> x;
  x.reserve(kFeatureDims);
  for (int c : counts) x.push_back(c);
  for (int t : totals) x.push_back(t);
  x.push_back(n_results);
  return x;
}

void FeatureVector::check() const {
  std::array<int, 3> t{};
  int n = 0;
  for (std::size_t i = 0; i < kCountDims; ++i) {
    if (counts[i] < 0) throw Error(Errc::invalid_argument, "negative feature count");
    t[i % 3] += counts[i];
    n += counts[i];
  }
  if (t != totals || n != n_results) {
    throw Error(Errc::invalid_argument, "feature totals disagree with counts");
  }
}

FeatureVector featurize(const std::vector<core::EvidenceItem>& evidence) {
  FeatureVector fv;
  for (const auto& e : evidence) fv.add(e.source_tier.value_or(kDefaultTier), e.label);
  return fv;
}

FeatureVector featurize(const std::map<core::TierLabel, int>& counts) {
  FeatureVector fv;
  for (const auto& [key, n] : counts) fv.add(key.first, key.second, n);
  return fv;
}

std::map<core::TierLabel, int> evidence_counts(const std::vector<core::EvidenceItem>& evidence) {
  std::map<core::TierLabel, int> out;
  for (const auto& e : evidence) ++out[{e.source_tier.value_or(kDefaultTier), e.label}];
  return out;
}

void to_json(nlohmann::json& j, const FeatureVector& fv) {
  j = nlohmann::json{{"counts", fv.counts}, {"totals", fv.totals}, {"n_results", fv.n_results}};
}

void from_json(const nlohmann::json& j, FeatureVector& fv) {
  try {
    if (j.is_array()) {
      if (j.size() != kFeatureDims) {
        throw Error(Errc::parse_failure, "feature array must have 19 entries");
      }
      for (std::size_t i = 0; i < kCountDims; ++i) fv.counts[i] = j[i].get<int>();
      for (std::size_t i = 0; i < 3; ++i) fv.totals[i] = j[kCountDims + i].get<int>();
      fv.n_results = j[kFeatureDims - 1].get<int>();
    } else {
      fv.counts = j.at("counts").get<std::array<int, kCountDims>>();
      fv.totals = j.at("totals").get<std::array<int, 3>>();
      fv.n_results = j.at("n_results").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad feature vector: ") + e.what());
  }
  try {
    fv.check();
  } catch (const Error& e) {
    throw Error(Errc::parse_failure, e.what());
  }
}

DomainEncoder DomainEncoder::top_k(
    const std::vector<std::vector<core::EvidenceItem>>& evidence_lists, std::size_t k) {
  std::map<std::string, int> freq;
  for (const auto& list : evidence_lists) {
    for (const auto& e : list) ++freq[e.result.domain];
  }
  std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> domains;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) domains.push_back(ranked[i].first);
  return DomainEncoder(std::move(domains));
}

std::vector<double> DomainEncoder::encode(const std::vector<core::EvidenceItem>& evidence) const {
  std::vector<double> x = featurize(evidence).dense();
  x.resize(dims(), 0.0);
  for (const auto& e : evidence) {
    const auto it = std::find(domains_.begin(), domains_.end(), e.result.domain);
    if (it == domains_.end()) continue;
    const auto slot = static_cast<std::size_t>(it - domains_.begin());
    x[kFeatureDims + 3 * slot + core::label_index(e.label)] += 1.0;
  }
  return x;
}

}  // namespace claimcheck::aggregation
