#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/aggregation/gbdt.hpp"
#include "claimcheck/eval/metrics.hpp"

namespace claimcheck::eval {

// Stratified split into k folds of example indices. Each class is shuffled
// with the seed and the classes are dealt round-robin in turn, so fold sizes
// and per-fold class counts each differ by at most one. Throws
// Error(invalid_argument) for k < 2 and Error(k_too_large) for k > n.
std::vector<std::vector<std::size_t>> kfold_split(const std::vector<int>& labels, std::size_t k,
                                                  std::uint64_t seed);

// Columns of the benchmark tables: micro-F1 plus per-class P/R/F1 for real
// (T) and fake (F) items.
struct MetricsTable {
  double f1 = 0.0;
  double f1_t = 0.0, r_t = 0.0, p_t = 0.0;
  double f1_f = 0.0, r_f = 0.0, p_f = 0.0;
  double accuracy = 0.0;
  std::size_t n = 0;
};

MetricsTable metrics_table(const std::vector<int>& preds, const std::vector<int>& golds);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  MetricsTable metrics;
};

struct CvReport {
  std::vector<FoldResult> folds;
  MetricsTable pooled;
  // Held-out prediction for every example, in input order.
  std::vector<int> predictions;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Trains on k-1 folds and predicts the held-out one (threshold 0.5), then
// pools the predictions. Training errors propagate.
CvReport run_cv(const std::vector<aggregation::TrainingRow>& rows, std::size_t k,
                const aggregation::GbdtParams& params = {}, std::uint64_t seed = 0);

nlohmann::json to_json(const MetricsTable& m);

}  // namespace claimcheck::eval
