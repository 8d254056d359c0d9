#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/core/types.hpp"
#include "claimcheck/llm/transcript.hpp"

namespace claimcheck::retrieval {

enum class BackendKind { web_api, fixture_corpus };

// A search engine. Returned results carry id, url, domain, title and
// snippet_or_body; query_rank and retrieved_at are stamped by the caller.
// Implementations must be safe for concurrent calls.
class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  virtual std::string name() const = 0;
  virtual BackendKind kind() const = 0;
  // At most `limit` results, best first. Throws Error(backend_unreachable).
  virtual std::vector<core::SearchResult> search(const std::string& query, std::size_t limit) = 0;
};

struct CorpusDocument {
  std::string id;
  std::string url;
  std::string domain;
  std::string title;
  std::string body;
};

// Offline engine over a JSONL corpus of {id, url, domain, title, body}.
// score = number of distinct case-folded alphanumeric tokens shared by the
// query and the document's title + body; zero scores never match; ties go to
// the smaller id.
class FixtureCorpusBackend final : public SearchBackend {
 public:
  FixtureCorpusBackend(std::string name, std::vector<CorpusDocument> docs);

  // Throws Error(corpus_missing) when the file cannot be read and
  // Error(parse_failure) on a malformed line.
  static FixtureCorpusBackend load(std::string name, const std::string& path);

  std::string name() const override { return name_; }
  BackendKind kind() const override { return BackendKind::fixture_corpus; }
  std::vector<core::SearchResult> search(const std::string& query, std::size_t limit) override;

  std::size_t score(const std::string& query, std::size_t doc_index) const;
  const std::vector<CorpusDocument>& documents() const { return docs_; }

 private:
  std::string name_;
  std::vector<CorpusDocument> docs_;
  std::vector<std::vector<std::string>> doc_tokens_;  // sorted, unique
};

// JSON-over-HTTP search API such as Google Programmable Search:
// GET {endpoint}?{query_param}=...&{key_param}=...&{count_param}=n&<params>
// and read {items_field}[*].{url_field,title_field,snippet_field}.
struct WebApiConfig {
  std::string endpoint;
  std::string query_param = "q";
  std::string key_param = "key";
  std::string api_key_env;
  std::map<std::string, std::string> params;
  std::string count_param = "num";
  std::size_t max_count = 10;
  std::string items_field = "items";
  std::string url_field = "link";
  std::string title_field = "title";
  std::string snippet_field = "snippet";
  std::chrono::seconds timeout{30};
};

class WebApiBackend final : public SearchBackend {
 public:
  WebApiBackend(std::string name, WebApiConfig config);

  std::string name() const override { return name_; }
  BackendKind kind() const override { return BackendKind::web_api; }
  std::vector<core::SearchResult> search(const std::string& query, std::size_t limit) override;

 private:
  std::string name_;
  WebApiConfig config_;
  std::optional<std::string> api_key_;
};

// Replay key for one backend call.
std::string search_request_digest(const std::string& backend, const std::string& query,
                                  std::size_t limit);

// Forwards to `inner` and appends each call's results to a transcript file.
class RecordingBackend final : public SearchBackend {
 public:
  RecordingBackend(std::shared_ptr<SearchBackend> inner, std::string transcript_path);

  std::string name() const override { return inner_->name(); }
  BackendKind kind() const override { return inner_->kind(); }
  std::vector<core::SearchResult> search(const std::string& query, std::size_t limit) override;

 private:
  std::shared_ptr<SearchBackend> inner_;
  llm::TranscriptWriter writer_;
};

// Serves recorded calls; a miss throws Error(backend_unreachable).
class ReplayBackend final : public SearchBackend {
 public:
  ReplayBackend(std::string name, BackendKind kind, llm::Transcript transcript)
      : name_(std::move(name)), kind_(kind), transcript_(std::move(transcript)) {}

  std::string name() const override { return name_; }
  BackendKind kind() const override { return kind_; }
  std::vector<core::SearchResult> search(const std::string& query, std::size_t limit) override;

 private:
  std::string name_;
  BackendKind kind_;
  llm::Transcript transcript_;
};

std::string results_to_json(const std::vector<core::SearchResult>& results);
std::vector<core::SearchResult> results_from_json(std::string_view text);

// Backend section of the config:
//   {"name", "kind": "fixture_corpus" | "web_api" | "replay", "corpus",
//    "transcript", "record_to", "web": {WebApiConfig fields}}
struct BackendConfig {
  std::string name;
  std::string kind = "fixture_corpus";
  std::string corpus;
  std::string transcript;
  std::string record_to;
  WebApiConfig web;

  static BackendConfig from_json(const nlohmann::json& j);
};

std::shared_ptr<SearchBackend> make_backend(const BackendConfig& config);

}  // namespace claimcheck::retrieval
