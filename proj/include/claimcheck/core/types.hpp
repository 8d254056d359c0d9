#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace claimcheck::core {

// Millisecond-resolution UTC instant, serialized as "YYYY-MM-DDTHH:MM:SS.mmmZ".
struct Timestamp {
  std::chrono::sys_time<std::chrono::milliseconds> value{};

  static Timestamp now();
  static Timestamp from_unix_millis(std::int64_t ms);
  static Timestamp parse(std::string_view iso);  // throws Error(parse_failure)

  std::int64_t unix_millis() const { return value.time_since_epoch().count(); }
  std::string to_iso8601() const;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Injectable time source; pipelines take one so replayed runs can pin time.
using Clock = std::function<Timestamp()>;

struct NewsArticle {
  std::string id;
  std::string title;
  std::string body;
  std::optional<std::string> url;
  std::optional<Timestamp> published_at;

  friend bool operator==(const NewsArticle&, const NewsArticle&) = default;
};

enum class Granularity { main, key };

struct Claim {
  std::string id;
  std::string article_id;
  std::string text;
  Granularity granularity = Granularity::key;
  int ordinal = 0;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct SearchQuery {
  std::string claim_id;
  std::string text;
  int rank = 0;

  friend bool operator==(const SearchQuery&, const SearchQuery&) = default;
};

struct SearchResult {
  std::string id;
  int query_rank = 0;
  std::string url;
  std::string domain;
  std::string title;
  std::string snippet_or_body;
  Timestamp retrieved_at;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

enum class VerdictLabel { support = 0, negate = 1, baseless = 2 };
inline constexpr std::array<VerdictLabel, 3> kAllLabels = {
    VerdictLabel::support, VerdictLabel::negate, VerdictLabel::baseless};

enum class Confidence { high, medium, low };

inline constexpr int kMinTier = 1;
inline constexpr int kMaxTier = 5;

struct EvidenceItem {
  std::string claim_id;
  SearchResult result;
  VerdictLabel label = VerdictLabel::baseless;
  Confidence confidence = Confidence::low;
  std::string rationale;
  // Unset until credibility tiers are attached.
  std::optional<int> source_tier;

  friend bool operator==(const EvidenceItem&, const EvidenceItem&) = default;
};

enum class ClaimDecision { supported, refuted, insufficient_evidence };

using TierLabel = std::pair<int, VerdictLabel>;

struct ClaimVerdict {
  std::string claim_id;
  double truth_probability = 0.5;
  ClaimDecision decision = ClaimDecision::insufficient_evidence;
  std::map<TierLabel, int> evidence_counts;

  friend bool operator==(const ClaimVerdict&, const ClaimVerdict&) = default;
};

enum class ArticleVerdict { real, fake, unverified };

struct VerificationReport {
  NewsArticle article;
  std::vector<Claim> claims;
  std::vector<SearchQuery> queries;
  std::vector<EvidenceItem> evidence;
  std::vector<ClaimVerdict> claim_verdicts;
  ArticleVerdict article_verdict = ArticleVerdict::unverified;
  double article_probability = 0.5;
  std::string pipeline_version;
  std::string content_hash;
  // Set when the report was produced without retrieval; relaxes the
  // one-query-per-claim invariant.
  bool extraction_only = false;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

// Enum <-> token conversions. from_string variants throw Error(parse_failure)
// for anything outside the closed set.
std::string_view to_string(Granularity g);
std::string_view to_string(VerdictLabel l);
std::string_view to_string(Confidence c);
std::string_view to_string(ClaimDecision d);
std::string_view to_string(ArticleVerdict v);

Granularity granularity_from_string(std::string_view s);
VerdictLabel label_from_string(std::string_view s);
Confidence confidence_from_string(std::string_view s);
ClaimDecision decision_from_string(std::string_view s);
ArticleVerdict article_verdict_from_string(std::string_view s);

std::optional<VerdictLabel> try_label(std::string_view s);
std::optional<Confidence> try_confidence(std::string_view s);

constexpr int label_index(VerdictLabel l) { return static_cast<int>(l); }

}  // namespace claimcheck::core
