#include "claimcheck/core/json.hpp"

#include "claimcheck/core/errors.hpp"

namespace claimcheck::core {

namespace {

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

}  // namespace

void to_json(json& j, const Timestamp& t) { j = t.to_iso8601(); }
void from_json(const json& j, Timestamp& t) { t = Timestamp::parse(j.get<std::string>()); }

void to_json(json& j, VerdictLabel l) { j = std::string(to_string(l)); }
void from_json(const json& j, VerdictLabel& l) {
  if (!j.is_string()) throw Error(Errc::parse_failure, "label must be a string");
  l = label_from_string(j.get<std::string>());
}

void to_json(json& j, const NewsArticle& a) {
  j = json{{"id", a.id}, {"title", a.title}, {"body", a.body}};
  j["url"] = a.url ? json(*a.url) : json(nullptr);
  j["published_at"] = a.published_at ? json(*a.published_at) : json(nullptr);
}

void from_json(const json& j, NewsArticle& a) {
  a.id = j.value("id", std::string());
  a.title = j.value("title", std::string());
  a.body = j.at("body").get<std::string>();
  a.url = optional_field<std::string>(j, "url");
  a.published_at = optional_field<Timestamp>(j, "published_at");
}

void to_json(json& j, const Claim& c) {
  j = json{{"id", c.id},
           {"article_id", c.article_id},
           {"text", c.text},
           {"granularity", to_string(c.granularity)},
           {"ordinal", c.ordinal}};
}

void from_json(const json& j, Claim& c) {
  c.id = j.at("id").get<std::string>();
  c.article_id = j.at("article_id").get<std::string>();
  c.text = j.at("text").get<std::string>();
  c.granularity = granularity_from_string(j.at("granularity").get<std::string>());
  c.ordinal = j.at("ordinal").get<int>();
}

void to_json(json& j, const SearchQuery& q) {
  j = json{{"claim_id", q.claim_id}, {"text", q.text}, {"rank", q.rank}};
}

void from_json(const json& j, SearchQuery& q) {
  q.claim_id = j.at("claim_id").get<std::string>();
  q.text = j.at("text").get<std::string>();
  q.rank = j.at("rank").get<int>();
}

void to_json(json& j, const SearchResult& r) {
  j = json{{"id", r.id},
           {"query_rank", r.query_rank},
           {"url", r.url},
           {"domain", r.domain},
           {"title", r.title},
           {"snippet_or_body", r.snippet_or_body},
           {"retrieved_at", r.retrieved_at}};
}

void from_json(const json& j, SearchResult& r) {
  r.id = j.at("id").get<std::string>();
  r.query_rank = j.at("query_rank").get<int>();
  r.url = j.at("url").get<std::string>();
  r.domain = j.at("domain").get<std::string>();
  r.title = j.value("title", std::string());
  r.snippet_or_body = j.at("snippet_or_body").get<std::string>();
  r.retrieved_at = j.at("retrieved_at").get<Timestamp>();
}

void to_json(json& j, const EvidenceItem& e) {
  j = json{{"claim_id", e.claim_id},
           {"result", e.result},
           {"label", e.label},
           {"confidence", to_string(e.confidence)},
           {"rationale", e.rationale}};
  j["source_tier"] = e.source_tier ? json(*e.source_tier) : json(nullptr);
}

void from_json(const json& j, EvidenceItem& e) {
  e.claim_id = j.at("claim_id").get<std::string>();
  e.result = j.at("result").get<SearchResult>();
  e.label = j.at("label").get<VerdictLabel>();
  e.confidence = confidence_from_string(j.at("confidence").get<std::string>());
  e.rationale = j.value("rationale", std::string());
  e.source_tier = optional_field<int>(j, "source_tier");
}

void to_json(json& j, const ClaimVerdict& v) {
  json counts = json::array();
  for (const auto& [key, n] : v.evidence_counts) {
    counts.push_back(json{{"tier", key.first}, {"label", key.second}, {"count", n}});
  }
  j = json{{"claim_id", v.claim_id},
           {"truth_probability", v.truth_probability},
           {"decision", to_string(v.decision)},
           {"evidence_counts", std::move(counts)}};
}

void from_json(const json& j, ClaimVerdict& v) {
  v.claim_id = j.at("claim_id").get<std::string>();
  v.truth_probability = j.at("truth_probability").get<double>();
  v.decision = decision_from_string(j.at("decision").get<std::string>());
  v.evidence_counts.clear();
  for (const auto& entry : j.value("evidence_counts", json::array())) {
    v.evidence_counts[{entry.at("tier").get<int>(), entry.at("label").get<VerdictLabel>()}] =
        entry.at("count").get<int>();
  }
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"article", r.article},
           {"claims", r.claims},
           {"queries", r.queries},
           {"evidence", r.evidence},
           {"claim_verdicts", r.claim_verdicts},
           {"article_verdict", to_string(r.article_verdict)},
           {"article_probability", r.article_probability},
           {"pipeline_version", r.pipeline_version},
           {"content_hash", r.content_hash},
           {"extraction_only", r.extraction_only}};
}

void from_json(const json& j, VerificationReport& r) {
  r.article = j.at("article").get<NewsArticle>();
  r.claims = j.value("claims", json::array()).get<std::vector<Claim>>();
  r.queries = j.value("queries", json::array()).get<std::vector<SearchQuery>>();
  r.evidence = j.value("evidence", json::array()).get<std::vector<EvidenceItem>>();
  r.claim_verdicts = j.value("claim_verdicts", json::array()).get<std::vector<ClaimVerdict>>();
  r.article_verdict = article_verdict_from_string(j.at("article_verdict").get<std::string>());
  r.article_probability = j.at("article_probability").get<double>();
  r.pipeline_version = j.value("pipeline_version", std::string());
  r.content_hash = j.value("content_hash", std::string());
  r.extraction_only = j.value("extraction_only", false);
}

std::string to_jsonl_line(const EvidenceItem& e) { return json(e).dump(); }

EvidenceItem evidence_from_jsonl_line(std::string_view line) {
  try {
    return json::parse(line).get<EvidenceItem>();
  } catch (const json::exception& ex) {
    throw Error(Errc::parse_failure, std::string("bad evidence line: ") + ex.what());
  }
}

}  // namespace claimcheck::core
