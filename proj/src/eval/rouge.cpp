#include "claimcheck/eval/rouge.hpp"

#include <algorithm>
#include <map>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::eval {

RougeVariant rouge_variant_from_string(std::string_view s) {
  const std::string f = core::casefold(s);
  if (f == "r1" || f == "rouge1" || f == "rouge-1") return RougeVariant::r1;
  if (f == "r2" || f == "rouge2" || f == "rouge-2") return RougeVariant::r2;
  if (f == "rl" || f == "rougel" || f == "rouge-l") return RougeVariant::rl;
  throw Error(Errc::parse_failure, "unknown ROUGE variant: " + std::string(s));
}

namespace {

using Tokens = std::vector<std::string>;

std::map<Tokens, std::size_t> ngram_counts(const Tokens& t, std::size_t n) {
  std::map<Tokens, std::size_t> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) ++out[Tokens(t.begin() + i, t.begin() + i + n)];
  return out;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Prf from_overlap(std::size_t overlap, std::size_t cand_total, std::size_t ref_total) {
  Prf out;
  if (cand_total == 0 || ref_total == 0) return out;
  out.precision = static_cast<double>(overlap) / static_cast<double>(cand_total);
  out.recall = static_cast<double>(overlap) / static_cast<double>(ref_total);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

}  // namespace

Prf rouge(std::string_view candidate, std::string_view reference, RougeVariant variant) {
  const Tokens cand = core::alnum_tokens(candidate);
  const Tokens ref = core::alnum_tokens(reference);
  if (cand.empty() || ref.empty()) return {};

  if (variant == RougeVariant::rl) return from_overlap(lcs_length(cand, ref), cand.size(), ref.size());

  const std::size_t n = variant == RougeVariant::r1 ? 1 : 2;
  const auto c = ngram_counts(cand, n);
  const auto r = ngram_counts(ref, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : c) {
    const auto it = r.find(gram);
    if (it != r.end()) overlap += std::min(count, it->second);
  }
  const auto total = [n](const Tokens& t) { return t.size() >= n ? t.size() - n + 1 : 0; };
  return from_overlap(overlap, total(cand), total(ref));
}

}  // namespace claimcheck::eval
