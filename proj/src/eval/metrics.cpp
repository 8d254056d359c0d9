#include "claimcheck/eval/metrics.hpp"

#include <set>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::eval {

namespace {

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

void require_same_length(const std::vector<int>& preds, const std::vector<int>& golds) {
  if (preds.size() != golds.size()) {
    throw Error(Errc::length_mismatch, std::to_string(preds.size()) + " predictions for " +
                                           std::to_string(golds.size()) + " gold labels");
  }
}

}  // namespace

Prf prf1(const ConfusionCounts& c) {
  Prf out;
  out.precision = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  out.recall = ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  out.f1 = ratio(2.0 * out.precision * out.recall, out.precision + out.recall);
  return out;
}

ConfusionCounts confusion(const std::vector<int>& preds, const std::vector<int>& golds,
                          int positive) {
  require_same_length(preds, golds);
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool p = preds[i] == positive;
    const bool g = golds[i] == positive;
    if (p && g) ++c.tp;
    else if (p) ++c.fp;
    else if (g) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double micro_f1(const std::vector<int>& preds, const std::vector<int>& golds) {
  require_same_length(preds, golds);
  std::set<int> classes(preds.begin(), preds.end());
  classes.insert(golds.begin(), golds.end());
  std::size_t tp = 0, fp = 0, fn = 0;
  for (int cls : classes) {
    const ConfusionCounts c = confusion(preds, golds, cls);
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
  }
  // 2TP / (2TP + FP + FN): the harmonic mean of micro P and R without the
  // rounding of the intermediate ratios.
  return ratio(2.0 * static_cast<double>(tp), static_cast<double>(2 * tp + fp + fn));
}

double accuracy(const std::vector<int>& preds, const std::vector<int>& golds) {
  require_same_length(preds, golds);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i] == golds[i];
  return ratio(static_cast<double>(correct), static_cast<double>(preds.size()));
}

double success_rate(const std::vector<int>& preds, const std::vector<int>& golds) {
  require_same_length(preds, golds);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (golds[i] != kFake) {
      throw Error(Errc::non_fake_gold, "success rate needs fake-only gold labels; item " +
                                           std::to_string(i) + " is not fake");
    }
    hits += preds[i] == kFake;
  }
  return ratio(static_cast<double>(hits), static_cast<double>(golds.size()));
}

}  // namespace claimcheck::eval
