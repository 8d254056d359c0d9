#include "claimcheck/eval/cv.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::eval {

std::vector<std::vector<std::size_t>> kfold_split(const std::vector<int>& labels, std::size_t k,
                                                  std::uint64_t seed) {
  if (k < 2) throw Error(Errc::invalid_argument, "k-fold needs k >= 2");
  if (k > labels.size()) {
    throw Error(Errc::k_too_large, "k=" + std::to_string(k) + " exceeds " +
                                       std::to_string(labels.size()) + " examples");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> dealt;
  dealt.reserve(labels.size());
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    dealt.insert(dealt.end(), members.begin(), members.end());
  }
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < dealt.size(); ++i) folds[i % k].push_back(dealt[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

MetricsTable metrics_table(const std::vector<int>& preds, const std::vector<int>& golds) {
  MetricsTable m;
  m.n = golds.size();
  m.f1 = micro_f1(preds, golds);
  m.accuracy = accuracy(preds, golds);
  const Prf t = prf1(confusion(preds, golds, kReal));
  const Prf f = prf1(confusion(preds, golds, kFake));
  m.f1_t = t.f1;
  m.r_t = t.recall;
  m.p_t = t.precision;
  m.f1_f = f.f1;
  m.r_f = f.recall;
  m.p_f = f.precision;
  return m;
}

nlohmann::json to_json(const MetricsTable& m) {
  return nlohmann::json{{"F1", m.f1},   {"F1-T", m.f1_t}, {"R-T", m.r_t},
                        {"P-T", m.p_t}, {"F1-F", m.f1_f}, {"R-F", m.r_f},
                        {"P-F", m.p_f}, {"accuracy", m.accuracy}, {"n", m.n}};
}

nlohmann::json CvReport::to_json() const {
  nlohmann::json folds_j = nlohmann::json::array();
  for (const auto& f : folds) {
    folds_j.push_back({{"fold", f.fold},
                       {"n_train", f.n_train},
                       {"n_test", f.n_test},
                       {"metrics", eval::to_json(f.metrics)}});
  }
  return {{"folds", folds_j}, {"pooled", eval::to_json(pooled)}};
}

std::string CvReport::to_text() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %6s %6s %6s %6s %6s %6s %6s\n", "fold", "F1", "F1-T",
                "R-T", "P-T", "F1-F", "R-F", "P-F");
  out << line;
  auto row = [&](const std::string& name, const MetricsTable& m) {
    std::snprintf(line, sizeof line, "%-8s %6.3f %6.3f %6.3f %6.3f %6.3f %6.3f %6.3f\n",
                  name.c_str(), m.f1, m.f1_t, m.r_t, m.p_t, m.f1_f, m.r_f, m.p_f);
    out << line;
  };
  for (const auto& f : folds) row(std::to_string(f.fold), f.metrics);
  row("pooled", pooled);
  return out.str();
}

CvReport run_cv(const std::vector<aggregation::TrainingRow>& rows, std::size_t k,
                const aggregation::GbdtParams& params, std::uint64_t seed) {
  std::vector<int> labels;
  labels.reserve(rows.size());
  for (const auto& r : rows) labels.push_back(r.second);
  const auto folds = kfold_split(labels, k, seed);

  CvReport report;
  report.predictions.assign(rows.size(), -1);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<bool> held(rows.size(), false);
    for (std::size_t i : folds[f]) held[i] = true;
    std::vector<aggregation::TrainingRow> train;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!held[i]) train.push_back(rows[i]);
    }
    const auto model = aggregation::train_gbdt(train, params);
    std::vector<int> preds, golds;
    for (std::size_t i : folds[f]) {
      const int p = model.predict(rows[i].first) >= 0.5 ? kReal : kFake;
      report.predictions[i] = p;
      preds.push_back(p);
      golds.push_back(labels[i]);
    }
    report.folds.push_back(FoldResult{f, train.size(), folds[f].size(), metrics_table(preds, golds)});
  }
  report.pooled = metrics_table(report.predictions, labels);
  return report;
}

}  // namespace claimcheck::eval
