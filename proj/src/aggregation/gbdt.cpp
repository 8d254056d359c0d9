#include "claimcheck/aggregation/gbdt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::aggregation {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;
constexpr double kMaxMargin = 30.0;
// Splits must beat this gain; guards against splitting on rounding noise.
constexpr double kMinGain = 1e-12;

std::string real_to_string(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(Errc::invalid_argument, "cannot format real");
  return std::string(buf, end);
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw Error(Errc::parse_failure, "bad real in model: " + s);
  }
  return v;
}

struct Grad {
  double g = 0.0;
  double h = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<TrainingRow>& rows, const std::vector<Grad>& grads,
              const GbdtParams& params, std::size_t n_features)
      : rows_(rows), grads_(grads), params_(params), n_features_(n_features) {}

  RegressionTree build() {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    tree_.nodes.clear();
    grow(all, 0);
    return std::move(tree_);
  }

 private:
  double x(std::size_t row, std::size_t f) const { return rows_[row].first[f]; }

  double score(double g, double h) const { return g * g / (h + params_.lambda); }

  int grow(const std::vector<std::size_t>& idx, int depth) {
    double G = 0.0, H = 0.0;
    for (std::size_t i : idx) {
      G += grads_[i].g;
      H += grads_[i].h;
    }
    const int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});

    const auto min_leaf = static_cast<std::size_t>(std::max(1, params_.min_leaf));
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = kMinGain;
    if (depth < params_.max_depth && idx.size() >= 2 * min_leaf) {
      const double parent = score(G, H);
      std::vector<std::size_t> order(idx);
      for (std::size_t f = 0; f < n_features_; ++f) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          const double xa = x(a, f), xb = x(b, f);
          return xa != xb ? xa < xb : a < b;
        });
        double GL = 0.0, HL = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
          GL += grads_[order[k]].g;
          HL += grads_[order[k]].h;
          const double lo = x(order[k], f), hi = x(order[k + 1], f);
          if (lo == hi) continue;
          const std::size_t n_left = k + 1;
          if (n_left < min_leaf || order.size() - n_left < min_leaf) continue;
          const double gain = score(GL, HL) + score(G - GL, H - HL) - parent;
          if (gain > best_gain) {
            best_gain = gain;
            best_feature = static_cast<int>(f);
            best_threshold = lo + (hi - lo) / 2.0;
          }
        }
      }
    }

    if (best_feature < 0) {
      tree_.nodes[node_id].value = -G / (H + params_.lambda);
      return node_id;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (x(i, static_cast<std::size_t>(best_feature)) < best_threshold ? left : right).push_back(i);
    }
    tree_.nodes[node_id].feature = best_feature;
    tree_.nodes[node_id].threshold = best_threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    tree_.nodes[node_id].left = l;
    tree_.nodes[node_id].right = r;
    return node_id;
  }

  const std::vector<TrainingRow>& rows_;
  const std::vector<Grad>& grads_;
  const GbdtParams& params_;
  std::size_t n_features_;
  RegressionTree tree_;
};

int depth_of(const RegressionTree& t, int node) {
  const TreeNode& n = t.nodes.at(static_cast<std::size_t>(node));
  if (n.is_leaf()) return 0;
  return 1 + std::max(depth_of(t, n.left), depth_of(t, n.right));
}

}  // namespace

void GbdtParams::validate() const {
  if (n_rounds < 0 || max_depth < 0 || min_leaf < 1 || !(learning_rate > 0.0) || lambda < 0.0) {
    throw Error(Errc::invalid_argument,
                "GBDT params need n_rounds>=0, max_depth>=0, min_leaf>=1, learning_rate>0, "
                "lambda>=0");
  }
}

double RegressionTree::evaluate(const std::vector<double>& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                        : n.right);
  }
  return nodes[i].value;
}

int RegressionTree::depth() const { return nodes.empty() ? 0 : depth_of(*this, 0); }

double sigmoid(double margin) {
  margin = std::clamp(margin, -kMaxMargin, kMaxMargin);
  return 1.0 / (1.0 + std::exp(-margin));
}

double GbdtModel::margin(const std::vector<double>& x) const {
  if (x.size() < n_features) {
    throw Error(Errc::invalid_argument, "feature vector has " + std::to_string(x.size()) +
                                            " dims, model expects " + std::to_string(n_features));
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += t.evaluate(x);
  return base_score + learning_rate * sum;
}

double GbdtModel::predict(const std::vector<double>& x) const { return sigmoid(margin(x)); }

void GbdtModel::check() const {
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& nodes = trees[t].nodes;
    if (nodes.empty()) throw Error(Errc::invalid_argument, "empty tree");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const TreeNode& n = nodes[i];
      if (n.is_leaf()) continue;
      if (static_cast<std::size_t>(n.feature) >= n_features) {
        throw Error(Errc::invalid_argument, "split feature out of range in tree " +
                                                std::to_string(t));
      }
      const auto in_range = [&](int c) {
        return c > static_cast<int>(i) && c < static_cast<int>(nodes.size());
      };
      if (!in_range(n.left) || !in_range(n.right)) {
        throw Error(Errc::invalid_argument, "bad child index in tree " + std::to_string(t));
      }
    }
    if (trees[t].depth() > params.max_depth) {
      throw Error(Errc::invalid_argument, "tree " + std::to_string(t) + " exceeds max depth");
    }
  }
}

json GbdtModel::to_json() const {
  json trees_j = json::array();
  for (const auto& t : trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", real_to_string(n.value)}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", real_to_string(n.threshold)},
                         {"left", n.left},
                         {"right", n.right}});
      }
    }
    trees_j.push_back(std::move(nodes));
  }
  return json{{"format", "claimcheck-gbdt"},
              {"version", kModelVersion},
              {"n_features", n_features},
              {"base_score", real_to_string(base_score)},
              {"learning_rate", real_to_string(learning_rate)},
              {"params",
               {{"n_rounds", params.n_rounds},
                {"max_depth", params.max_depth},
                {"learning_rate", real_to_string(params.learning_rate)},
                {"min_leaf", params.min_leaf},
                {"lambda", real_to_string(params.lambda)}}},
              {"domains", domains},
              {"trees", std::move(trees_j)}};
}

GbdtModel GbdtModel::from_json(const json& j) {
  GbdtModel m;
  try {
    if (j.at("format") != "claimcheck-gbdt" || j.at("version") != kModelVersion) {
      throw Error(Errc::parse_failure, "unsupported model format");
    }
    m.n_features = j.at("n_features").get<std::size_t>();
    m.base_score = real_from_json(j.at("base_score"));
    m.learning_rate = real_from_json(j.at("learning_rate"));
    const json& p = j.at("params");
    m.params.n_rounds = p.at("n_rounds").get<int>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.learning_rate = real_from_json(p.at("learning_rate"));
    m.params.min_leaf = p.at("min_leaf").get<int>();
    m.params.lambda = real_from_json(p.at("lambda"));
    m.domains = j.value("domains", std::vector<std::string>{});
    for (const auto& tj : j.at("trees")) {
      RegressionTree t;
      for (const auto& nj : tj) {
        TreeNode n;
        if (nj.contains("leaf")) {
          n.value = real_from_json(nj.at("leaf"));
        } else {
          n.feature = nj.at("feature").get<int>();
          n.threshold = real_from_json(nj.at("threshold"));
          n.left = nj.at("left").get<int>();
          n.right = nj.at("right").get<int>();
        }
        t.nodes.push_back(n);
      }
      m.trees.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad model file: ") + e.what());
  }
  try {
    m.check();
  } catch (const Error& e) {
    throw Error(Errc::parse_failure, e.what());
  }
  return m;
}

std::string GbdtModel::digest() const { return core::sha256_hex(to_json().dump()); }

void GbdtModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot write model " + path);
  out << to_json().dump(1) << "\n";
}

GbdtModel GbdtModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read model " + path);
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::parse_failure, "model file is not JSON: " + path);
  return from_json(j);
}

GbdtModel train_gbdt(const std::vector<TrainingRow>& rows, const GbdtParams& params) {
  params.validate();
  if (rows.empty()) throw Error(Errc::empty_rows, "no training rows");
  const std::size_t d = rows.front().first.size();
  std::size_t positives = 0;
  for (const auto& [x, y] : rows) {
    if (x.size() != d) throw Error(Errc::invalid_argument, "rows differ in dimension");
    if (y != 0 && y != 1) throw Error(Errc::invalid_argument, "labels must be 0 or 1");
    positives += static_cast<std::size_t>(y);
  }
  if (positives == 0 || positives == rows.size()) {
    throw Error(Errc::degenerate_labels, "training labels are all " +
                                             std::to_string(rows.front().second));
  }

  GbdtModel model;
  model.n_features = d;
  model.params = params;
  model.learning_rate = params.learning_rate;
  const double rate = static_cast<double>(positives) / static_cast<double>(rows.size());
  model.base_score = std::log(rate / (1.0 - rate));

  std::vector<double> margins(rows.size(), model.base_score);
  std::vector<Grad> grads(rows.size());
  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double p = sigmoid(margins[i]);
      grads[i] = Grad{p - rows[i].second, p * (1.0 - p)};
    }
    RegressionTree tree = TreeBuilder(rows, grads, params, d).build();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      margins[i] += params.learning_rate * tree.evaluate(rows[i].first);
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

GbdtModel train_gbdt(const std::vector<std::pair<FeatureVector, int>>& rows,
                     const GbdtParams& params) {
  std::vector<TrainingRow> dense;
  dense.reserve(rows.size());
  for (const auto& [fv, y] : rows) dense.emplace_back(fv.dense(), y);
  return train_gbdt(dense, params);
}

double log_loss(const std::vector<double>& probabilities, const std::vector<int>& labels) {
  if (probabilities.size() != labels.size()) {
    throw Error(Errc::length_mismatch, "log_loss inputs differ in length");
  }
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = probabilities[i];
    sum -= labels[i] == 1 ? std::log(p) : std::log(1.0 - p);
  }
  return sum / static_cast<double>(labels.size());
}

double training_log_loss(const GbdtModel& model, const std::vector<TrainingRow>& rows) {
  std::vector<double> p;
  std::vector<int> y;
  for (const auto& [x, label] : rows) {
    p.push_back(model.predict(x));
    y.push_back(label);
  }
  return log_loss(p, y);
}

double prior_log_loss(const std::vector<TrainingRow>& rows) {
  double positives = 0;
  for (const auto& r : rows) positives += r.second;
  const double rate = positives / static_cast<double>(rows.size());
  std::vector<double> p(rows.size(), rate);
  std::vector<int> y;
  for (const auto& r : rows) y.push_back(r.second);
  return log_loss(p, y);
}

std::vector<TrainingRow> load_training_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read training data " + path);
  std::vector<TrainingRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const json& f = j.at("features");
      std::vector<double> x;
      if (f.is_array()) {
        x = f.get<std::vector<double>>();
      } else {
        x = f.get<FeatureVector>().dense();
      }
      rows.emplace_back(std::move(x), j.at("label").get<int>());
    } catch (const json::exception& e) {
      throw Error(Errc::parse_failure, path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(Errc::parse_failure, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace claimcheck::aggregation
