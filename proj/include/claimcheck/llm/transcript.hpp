#pragma once

#include <cstddef>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "claimcheck/llm/prompts.hpp"

namespace claimcheck::llm {

// Replay key: SHA-256 of the template name and the rendered prompt.
std::string request_digest(TemplateName name, std::string_view prompt);

// Key for non-model traffic (search backends) stored in the same format.
std::string request_digest(std::string_view channel, std::string_view request);

// Ordered (request_digest, response_text) pairs with unique digests.
class Transcript {
 public:
  struct Entry {
    std::string request_digest;
    std::string response_text;
  };

  // JSONL of {"request_digest", "response_text"}. A repeated digest is an
  // error unless the response is identical.
  static Transcript load(const std::string& path);
  static Transcript parse(std::string_view jsonl);

  // Returns false (and leaves the transcript unchanged) when the digest is
  // already present.
  bool add(std::string digest, std::string response);

  std::optional<std::string> find(std::string_view digest) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  std::string to_jsonl() const;

 private:
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Appends entries to a transcript file, skipping digests already written.
class TranscriptWriter {
 public:
  explicit TranscriptWriter(std::string path);

  void append(const std::string& digest, const std::string& response);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
  Transcript seen_;
};

}  // namespace claimcheck::llm
