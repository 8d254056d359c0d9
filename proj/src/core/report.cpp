#include "claimcheck/core/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "claimcheck/core/domain.hpp"
#include "claimcheck/core/json.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::core {

void sort_evidence(std::vector<EvidenceItem>& evidence) {
  std::sort(evidence.begin(), evidence.end(), [](const EvidenceItem& a, const EvidenceItem& b) {
    return std::tie(a.claim_id, a.result.domain, a.result.url, a.result.query_rank, a.result.id) <
           std::tie(b.claim_id, b.result.domain, b.result.url, b.result.query_rank, b.result.id);
  });
}

VerificationReport canonical_sort(VerificationReport report) {
  std::stable_sort(report.claims.begin(), report.claims.end(),
                   [](const Claim& a, const Claim& b) {
                     return std::tie(a.granularity, a.ordinal, a.id) <
                            std::tie(b.granularity, b.ordinal, b.id);
                   });
  std::stable_sort(report.queries.begin(), report.queries.end(),
                   [](const SearchQuery& a, const SearchQuery& b) {
                     return std::tie(a.claim_id, a.rank, a.text) <
                            std::tie(b.claim_id, b.rank, b.text);
                   });
  sort_evidence(report.evidence);
  std::stable_sort(report.claim_verdicts.begin(), report.claim_verdicts.end(),
                   [](const ClaimVerdict& a, const ClaimVerdict& b) {
                     return a.claim_id < b.claim_id;
                   });
  return report;
}

std::string compute_content_hash(const VerificationReport& report) {
  json j = canonical_sort(report);
  j.erase("content_hash");
  for (auto& item : j["evidence"]) item["result"].erase("retrieved_at");
  return sha256_hex(j.dump());
}

VerificationReport seal(VerificationReport report) {
  report = canonical_sort(std::move(report));
  report.content_hash = compute_content_hash(report);
  return report;
}

namespace {

bool in_unit_interval(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

std::vector<std::string> validate(const VerificationReport& report) {
  std::vector<std::string> out;

  if (trim(report.article.body).empty()) out.push_back("article body is empty");

  std::set<std::string> claim_ids;
  std::set<std::tuple<std::string, Granularity, int>> ordinals;
  for (const Claim& c : report.claims) {
    const std::string who = "claim " + c.id + ": ";
    if (!claim_ids.insert(c.id).second) out.push_back(who + "duplicate claim id");
    if (trim(c.text).empty()) {
      out.push_back(who + "empty text");
    } else if (starts_with_bare_pronoun(c.text)) {
      out.push_back(who + "text starts with an unresolved pronoun");
    }
    if (c.ordinal < 0) out.push_back(who + "negative ordinal");
    if (!ordinals.insert({c.article_id, c.granularity, c.ordinal}).second) {
      out.push_back(who + "ordinal not unique for its granularity");
    }
    if (c.article_id != report.article.id) out.push_back(who + "article_id mismatch");
  }

  std::map<std::string, int> queries_per_claim;
  for (const SearchQuery& q : report.queries) {
    const std::string who = "query " + q.claim_id + "#" + std::to_string(q.rank) + ": ";
    if (!claim_ids.count(q.claim_id)) out.push_back(who + "unknown claim_id");
    if (trim(q.text).empty()) out.push_back(who + "empty text");
    if (q.rank < 0 || q.rank >= kMaxQueriesPerClaim) out.push_back(who + "rank out of range");
    ++queries_per_claim[q.claim_id];
  }
  for (const auto& [claim_id, n] : queries_per_claim) {
    if (n > kMaxQueriesPerClaim) {
      out.push_back("claim " + claim_id + ": more than 3 queries");
    }
  }
  if (!report.extraction_only) {
    for (const Claim& c : report.claims) {
      if (!queries_per_claim.count(c.id)) out.push_back("claim " + c.id + ": no queries");
    }
  }

  for (const EvidenceItem& e : report.evidence) {
    const std::string who = "evidence " + e.claim_id + "/" + e.result.id + ": ";
    if (!claim_ids.count(e.claim_id)) out.push_back(who + "unknown claim_id");
    if (!e.source_tier) {
      out.push_back(who + "source_tier missing");
    } else if (*e.source_tier < kMinTier || *e.source_tier > kMaxTier) {
      out.push_back(who + "source_tier out of range");
    }
    if (e.label != VerdictLabel::baseless && trim(e.rationale).empty()) {
      out.push_back(who + "empty rationale for " + std::string(to_string(e.label)));
    }
    if (trim(e.result.snippet_or_body).empty()) out.push_back(who + "empty snippet_or_body");
    if (e.result.domain != domain_of_url(e.result.url)) {
      out.push_back(who + "domain does not match url");
    }
  }

  for (const ClaimVerdict& v : report.claim_verdicts) {
    const std::string who = "verdict " + v.claim_id + ": ";
    if (!claim_ids.count(v.claim_id)) out.push_back(who + "unknown claim_id");
    if (!in_unit_interval(v.truth_probability)) out.push_back(who + "probability out of range");
    bool decisive = false;
    for (const auto& [key, n] : v.evidence_counts) {
      if (n < 0) out.push_back(who + "negative evidence count");
      if (key.first < kMinTier || key.first > kMaxTier) {
        out.push_back(who + "evidence_counts tier out of range");
      }
      if (key.second != VerdictLabel::baseless && n > 0) decisive = true;
    }
    if ((v.decision == ClaimDecision::insufficient_evidence) == decisive) {
      out.push_back(who + "decision inconsistent with evidence counts");
    }
  }

  if (!in_unit_interval(report.article_probability)) {
    out.push_back("article_probability out of range");
  }
  if (!report.content_hash.empty() && report.content_hash != compute_content_hash(report)) {
    out.push_back("content_hash mismatch");
  }
  return out;
}

}  // namespace claimcheck::core
