#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace claimcheck::eval {

// Binary gold labels: real (true) news is 1, fake is 0.
inline constexpr int kReal = 1;
inline constexpr int kFake = 0;

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Each ratio is 0 when its denominator is 0.
Prf prf1(const ConfusionCounts& counts);

// Counts with `positive` as the class of interest. Throws
// Error(length_mismatch).
ConfusionCounts confusion(const std::vector<int>& preds, const std::vector<int>& golds,
                          int positive);

// Micro-averaged F1 over every class that occurs in either list.
// Throws Error(length_mismatch).
double micro_f1(const std::vector<int>& preds, const std::vector<int>& golds);
double accuracy(const std::vector<int>& preds, const std::vector<int>& golds);

// Fraction of known-fake items predicted fake. Throws Error(non_fake_gold)
// when a gold label is not fake and Error(length_mismatch).
double success_rate(const std::vector<int>& preds, const std::vector<int>& golds);

}  // namespace claimcheck::eval
