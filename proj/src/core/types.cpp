#include "claimcheck/core/types.hpp"

#include <cstdio>
#include <ctime>

#include "claimcheck/core/errors.hpp"

namespace claimcheck {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::parse_failure: return "parse_failure";
    case Errc::missing_placeholder: return "missing_placeholder";
    case Errc::transport_exhausted: return "transport_exhausted";
    case Errc::transcript_miss: return "transcript_miss";
    case Errc::empty_article: return "empty_article";
    case Errc::extraction_failure: return "extraction_failure";
    case Errc::generation_failure: return "generation_failure";
    case Errc::backend_unreachable: return "backend_unreachable";
    case Errc::corpus_missing: return "corpus_missing";
    case Errc::degenerate_labels: return "degenerate_labels";
    case Errc::empty_rows: return "empty_rows";
    case Errc::empty_verdicts: return "empty_verdicts";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::k_too_large: return "k_too_large";
    case Errc::non_fake_gold: return "non_fake_gold";
    case Errc::not_found: return "not_found";
    case Errc::job_not_done: return "job_not_done";
    case Errc::payload_too_large: return "payload_too_large";
    case Errc::empty_body: return "empty_body";
    case Errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace claimcheck

namespace claimcheck::core {

Timestamp Timestamp::now() {
  return Timestamp{std::chrono::time_point_cast<std::chrono::milliseconds>(
      std::chrono::system_clock::now())};
}

Timestamp Timestamp::from_unix_millis(std::int64_t ms) {
  return Timestamp{std::chrono::sys_time<std::chrono::milliseconds>(
      std::chrono::milliseconds(ms))};
}

std::string Timestamp::to_iso8601() const {
  const std::int64_t ms = unix_millis();
  std::int64_t secs = ms / 1000;
  std::int64_t frac = ms % 1000;
  if (frac < 0) {
    frac += 1000;
    secs -= 1;
  }
  const std::time_t tt = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(frac));
  return buf;
}

Timestamp Timestamp::parse(std::string_view iso) {
  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const std::string str(iso);
  int consumed = 0;
  if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &y, &mo, &d, &h, &mi, &s,
                  &consumed) != 6) {
    throw Error(Errc::parse_failure, "bad timestamp: " + str);
  }
  int millis = 0;
  std::size_t pos = static_cast<std::size_t>(consumed);
  if (pos < str.size() && str[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < str.size() && str[pos] >= '0' && str[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (str[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) throw Error(Errc::parse_failure, "bad timestamp: " + str);
    for (; digits < 3; ++digits) millis *= 10;
  }
  if (pos + 1 != str.size() || str[pos] != 'Z') {
    throw Error(Errc::parse_failure, "timestamp must be UTC (Z): " + str);
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60) {
    throw Error(Errc::parse_failure, "timestamp out of range: " + str);
  }
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  const std::int64_t secs = static_cast<std::int64_t>(timegm(&tm));
  return from_unix_millis(secs * 1000 + millis);
}

std::string_view to_string(Granularity g) {
  return g == Granularity::main ? "main" : "key";
}

std::string_view to_string(VerdictLabel l) {
  switch (l) {
    case VerdictLabel::support: return "support";
    case VerdictLabel::negate: return "negate";
    case VerdictLabel::baseless: return "baseless";
  }
  return "baseless";
}

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::high: return "high";
    case Confidence::medium: return "medium";
    case Confidence::low: return "low";
  }
  return "low";
}

std::string_view to_string(ClaimDecision d) {
  switch (d) {
    case ClaimDecision::supported: return "supported";
    case ClaimDecision::refuted: return "refuted";
    case ClaimDecision::insufficient_evidence: return "insufficient_evidence";
  }
  return "insufficient_evidence";
}

std::string_view to_string(ArticleVerdict v) {
  switch (v) {
    case ArticleVerdict::real: return "real";
    case ArticleVerdict::fake: return "fake";
    case ArticleVerdict::unverified: return "unverified";
  }
  return "unverified";
}

namespace {

[[noreturn]] void bad_token(std::string_view what, std::string_view s) {
  throw Error(Errc::parse_failure,
              "invalid " + std::string(what) + " token: \"" + std::string(s) + "\"");
}

}  // namespace

Granularity granularity_from_string(std::string_view s) {
  if (s == "main") return Granularity::main;
  if (s == "key") return Granularity::key;
  bad_token("granularity", s);
}

std::optional<VerdictLabel> try_label(std::string_view s) {
  if (s == "support") return VerdictLabel::support;
  if (s == "negate") return VerdictLabel::negate;
  if (s == "baseless") return VerdictLabel::baseless;
  return std::nullopt;
}

std::optional<Confidence> try_confidence(std::string_view s) {
  if (s == "high") return Confidence::high;
  if (s == "medium") return Confidence::medium;
  if (s == "low") return Confidence::low;
  return std::nullopt;
}

VerdictLabel label_from_string(std::string_view s) {
  if (auto l = try_label(s)) return *l;
  bad_token("label", s);
}

Confidence confidence_from_string(std::string_view s) {
  if (auto c = try_confidence(s)) return *c;
  bad_token("confidence", s);
}

ClaimDecision decision_from_string(std::string_view s) {
  if (s == "supported") return ClaimDecision::supported;
  if (s == "refuted") return ClaimDecision::refuted;
  if (s == "insufficient_evidence") return ClaimDecision::insufficient_evidence;
  bad_token("decision", s);
}

ArticleVerdict article_verdict_from_string(std::string_view s) {
  if (s == "real") return ArticleVerdict::real;
  if (s == "fake") return ArticleVerdict::fake;
  if (s == "unverified") return ArticleVerdict::unverified;
  bad_token("article verdict", s);
}

}  // namespace claimcheck::core
