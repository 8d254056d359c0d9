#include "claimcheck/retrieval/backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "claimcheck/core/domain.hpp"
#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"
#include "claimcheck/llm/http_provider.hpp"

namespace claimcheck::retrieval {

using core::SearchResult;
using nlohmann::json;

namespace {

std::vector<std::string> token_set(std::string_view text) {
  auto tokens = core::alnum_tokens(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

std::size_t shared_count(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto k = b.begin();
  while (i != a.end() && k != b.end()) {
    if (*i < *k) {
      ++i;
    } else if (*k < *i) {
      ++k;
    } else {
      ++n;
      ++i;
      ++k;
    }
  }
  return n;
}

SearchResult to_result(const CorpusDocument& d) {
  SearchResult r;
  r.id = d.id;
  r.url = d.url;
  r.domain = core::domain_of_url(d.url);
  r.title = d.title;
  r.snippet_or_body = d.body;
  return r;
}

}  // namespace

FixtureCorpusBackend::FixtureCorpusBackend(std::string name, std::vector<CorpusDocument> docs)
    : name_(std::move(name)), docs_(std::move(docs)) {
  doc_tokens_.reserve(docs_.size());
  for (const auto& d : docs_) doc_tokens_.push_back(token_set(d.title + " " + d.body));
}

FixtureCorpusBackend FixtureCorpusBackend::load(std::string name, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::corpus_missing, "cannot read corpus " + path);
  std::vector<CorpusDocument> docs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      CorpusDocument d;
      d.id = j.at("id").get<std::string>();
      d.url = j.at("url").get<std::string>();
      d.domain = j.value("domain", core::domain_of_url(d.url));
      d.title = j.value("title", "");
      d.body = j.value("body", "");
      docs.push_back(std::move(d));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_failure,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return FixtureCorpusBackend(std::move(name), std::move(docs));
}

std::size_t FixtureCorpusBackend::score(const std::string& query, std::size_t doc_index) const {
  return shared_count(token_set(query), doc_tokens_.at(doc_index));
}

std::vector<SearchResult> FixtureCorpusBackend::search(const std::string& query,
                                                       std::size_t limit) {
  const auto q = token_set(query);
  std::vector<std::pair<std::size_t, std::size_t>> scored;  // (score, index)
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const std::size_t s = shared_count(q, doc_tokens_[i]);
    if (s > 0) scored.emplace_back(s, i);
  }
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return docs_[a.second].id < docs_[b.second].id;
  });
  if (scored.size() > limit) scored.resize(limit);
  std::vector<SearchResult> out;
  out.reserve(scored.size());
  for (const auto& [s, i] : scored) out.push_back(to_result(docs_[i]));
  return out;
}

WebApiBackend::WebApiBackend(std::string name, WebApiConfig config)
    : name_(std::move(name)), config_(std::move(config)) {
  if (!config_.api_key_env.empty()) {
    if (const char* v = std::getenv(config_.api_key_env.c_str())) api_key_ = v;
  }
}

std::vector<SearchResult> WebApiBackend::search(const std::string& query, std::size_t limit) {
  httplib::Params params(config_.params.begin(), config_.params.end());
  params.emplace(config_.query_param, query);
  if (api_key_ && !config_.key_param.empty()) params.emplace(config_.key_param, *api_key_);
  if (!config_.count_param.empty()) {
    params.emplace(config_.count_param, std::to_string(std::min(limit, config_.max_count)));
  }

  const llm::UrlParts parts = llm::split_url(config_.endpoint);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  auto res = client.Get(parts.path, params, httplib::Headers{});
  if (!res) {
    throw Error(Errc::backend_unreachable,
                name_ + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(Errc::backend_unreachable, name_ + ": HTTP " + std::to_string(res->status));
  }
  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw Error(Errc::backend_unreachable, name_ + ": non-JSON reply");

  std::vector<SearchResult> out;
  if (!reply.contains(config_.items_field)) return out;
  for (const auto& item : reply.at(config_.items_field)) {
    if (out.size() >= limit) break;
    if (!item.is_object() || !item.contains(config_.url_field)) continue;
    SearchResult r;
    r.url = item.at(config_.url_field).get<std::string>();
    r.id = core::sha256_hex(r.url).substr(0, 16);
    r.domain = core::domain_of_url(r.url);
    r.title = item.value(config_.title_field, "");
    r.snippet_or_body = item.value(config_.snippet_field, "");
    out.push_back(std::move(r));
  }
  return out;
}

std::string results_to_json(const std::vector<SearchResult>& results) {
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back({{"id", r.id},
                   {"url", r.url},
                   {"domain", r.domain},
                   {"title", r.title},
                   {"snippet_or_body", r.snippet_or_body}});
  }
  return arr.dump();
}

std::vector<SearchResult> results_from_json(std::string_view text) {
  std::vector<SearchResult> out;
  try {
    for (const auto& j : json::parse(text)) {
      SearchResult r;
      r.id = j.at("id").get<std::string>();
      r.url = j.at("url").get<std::string>();
      r.domain = j.at("domain").get<std::string>();
      r.title = j.at("title").get<std::string>();
      r.snippet_or_body = j.at("snippet_or_body").get<std::string>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad recorded search results: ") + e.what());
  }
  return out;
}

std::string search_request_digest(const std::string& backend, const std::string& query,
                                  std::size_t limit) {
  const json req{{"backend", backend}, {"query", query}, {"limit", limit}};
  return llm::request_digest(std::string_view("search"), req.dump());
}

RecordingBackend::RecordingBackend(std::shared_ptr<SearchBackend> inner,
                                   std::string transcript_path)
    : inner_(std::move(inner)), writer_(std::move(transcript_path)) {}

std::vector<SearchResult> RecordingBackend::search(const std::string& query, std::size_t limit) {
  auto results = inner_->search(query, limit);
  writer_.append(search_request_digest(inner_->name(), query, limit), results_to_json(results));
  return results;
}

std::vector<SearchResult> ReplayBackend::search(const std::string& query, std::size_t limit) {
  const auto hit = transcript_.find(search_request_digest(name_, query, limit));
  if (!hit) {
    throw Error(Errc::backend_unreachable,
                name_ + ": no recorded results for query \"" + query + "\"");
  }
  return results_from_json(*hit);
}

BackendConfig BackendConfig::from_json(const json& j) {
  BackendConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    c.kind = j.value("kind", c.kind);
    c.corpus = j.value("corpus", "");
    c.transcript = j.value("transcript", "");
    c.record_to = j.value("record_to", "");
    if (j.contains("web")) {
      const json& w = j.at("web");
      if (w.contains("api_key")) {
        throw Error(Errc::invalid_argument, "search API keys are read from the environment only");
      }
      WebApiConfig& web = c.web;
      web.endpoint = w.value("endpoint", "");
      web.query_param = w.value("query_param", web.query_param);
      web.key_param = w.value("key_param", web.key_param);
      web.api_key_env = w.value("api_key_env", web.api_key_env);
      web.params = w.value("params", web.params);
      web.count_param = w.value("count_param", web.count_param);
      web.max_count = w.value("max_count", web.max_count);
      web.items_field = w.value("items_field", web.items_field);
      web.url_field = w.value("url_field", web.url_field);
      web.title_field = w.value("title_field", web.title_field);
      web.snippet_field = w.value("snippet_field", web.snippet_field);
      web.timeout = std::chrono::seconds(w.value("timeout_s", 30));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("bad backend config: ") + e.what());
  }
  if (c.kind != "fixture_corpus" && c.kind != "web_api" && c.kind != "replay") {
    throw Error(Errc::invalid_argument, "unknown backend kind: " + c.kind);
  }
  return c;
}

std::shared_ptr<SearchBackend> make_backend(const BackendConfig& config) {
  std::shared_ptr<SearchBackend> backend;
  if (config.kind == "fixture_corpus") {
    if (config.corpus.empty()) {
      throw Error(Errc::corpus_missing, "backend " + config.name + " has no corpus path");
    }
    backend = std::make_shared<FixtureCorpusBackend>(
        FixtureCorpusBackend::load(config.name, config.corpus));
  } else if (config.kind == "web_api") {
    backend = std::make_shared<WebApiBackend>(config.name, config.web);
  } else {
    backend = std::make_shared<ReplayBackend>(config.name, BackendKind::web_api,
                                              llm::Transcript::load(config.transcript));
  }
  if (!config.record_to.empty()) {
    backend = std::make_shared<RecordingBackend>(backend, config.record_to);
  }
  return backend;
}

}  // namespace claimcheck::retrieval
