#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "claimcheck/aggregation/features.hpp"

namespace claimcheck::aggregation {

struct GbdtParams {
  int n_rounds = 100;
  int max_depth = 4;
  double learning_rate = 0.1;
  // Minimum number of rows on each side of a split.
  int min_leaf = 5;
  double lambda = 1.0;

  void validate() const;
  friend bool operator==(const GbdtParams&, const GbdtParams&) = default;
};

// Flat binary tree. Internal nodes send x[feature] < threshold to `left`.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(const std::vector<double>& x) const;
  int depth() const;
  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbdtModel {
  std::size_t n_features = kFeatureDims;
  double base_score = 0.0;
  double learning_rate = 0.1;
  GbdtParams params;
  std::vector<RegressionTree> trees;
  // Present when trained with raw-domain features.
  std::vector<std::string> domains;

  // base_score + learning_rate * sum of leaf values.
  double margin(const std::vector<double>& x) const;
  // Strictly inside (0, 1).
  double predict(const std::vector<double>& x) const;
  double predict(const FeatureVector& fv) const { return predict(fv.dense()); }

  // Throws Error(invalid_argument) when a split reads past n_features, a child
  // index is out of range, or a tree is deeper than params.max_depth.
  void check() const;

  // Versioned JSON; reals are shortest round-trip decimal strings.
  nlohmann::json to_json() const;
  static GbdtModel from_json(const nlohmann::json& j);
  std::string digest() const;

  void save(const std::string& path) const;
  static GbdtModel load(const std::string& path);

  friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

using TrainingRow = std::pair<std::vector<double>, int>;

// Newton boosting on logistic loss with exact greedy splits. Deterministic.
// Throws Error(empty_rows) and Error(degenerate_labels).
GbdtModel train_gbdt(const std::vector<TrainingRow>& rows, const GbdtParams& params = {});
GbdtModel train_gbdt(const std::vector<std::pair<FeatureVector, int>>& rows,
                     const GbdtParams& params = {});

double sigmoid(double margin);
double log_loss(const std::vector<double>& probabilities, const std::vector<int>& labels);
double training_log_loss(const GbdtModel& model, const std::vector<TrainingRow>& rows);
// Log-loss of the constant positive-rate predictor.
double prior_log_loss(const std::vector<TrainingRow>& rows);

// Training data JSONL: {"features": FeatureVector or [numbers], "label": 0|1}.
std::vector<TrainingRow> load_training_rows(const std::string& path);

}  // namespace claimcheck::aggregation
