#include "claimcheck/llm/transcript.hpp"

#include <json.hpp>
#include <sstream>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::llm {

using nlohmann::json;

std::string request_digest(TemplateName name, std::string_view prompt) {
  return request_digest(to_string(name), prompt);
}

std::string request_digest(std::string_view channel, std::string_view request) {
  std::string material(channel);
  material.push_back('\n');
  material.append(request);
  return core::sha256_hex(material);
}

Transcript Transcript::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open transcript: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Transcript Transcript::parse(std::string_view jsonl) {
  Transcript t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    const std::size_t nl = jsonl.find('\n', pos);
    const std::string_view line =
        core::trim(jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    if (!line.empty()) {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("request_digest") ||
          !j.contains("response_text")) {
        throw Error(Errc::parse_failure, "bad transcript line " + std::to_string(line_no));
      }
      std::string digest = j["request_digest"].get<std::string>();
      std::string response = j["response_text"].get<std::string>();
      if (auto existing = t.find(digest)) {
        if (*existing != response) {
          throw Error(Errc::parse_failure,
                      "conflicting transcript entries for digest " + digest);
        }
      } else {
        t.add(std::move(digest), std::move(response));
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return t;
}

bool Transcript::add(std::string digest, std::string response) {
  if (index_.count(digest)) return false;
  index_.emplace(digest, entries_.size());
  entries_.push_back({std::move(digest), std::move(response)});
  return true;
}

std::optional<std::string> Transcript::find(std::string_view digest) const {
  auto it = index_.find(digest);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].response_text;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& e : entries_) {
    out += json{{"request_digest", e.request_digest}, {"response_text", e.response_text}}.dump();
    out.push_back('\n');
  }
  return out;
}

TranscriptWriter::TranscriptWriter(std::string path) : path_(std::move(path)) {
  std::ifstream existing(path_);
  if (existing) {
    std::stringstream buf;
    buf << existing.rdbuf();
    seen_ = Transcript::parse(buf.str());
  }
}

void TranscriptWriter::append(const std::string& digest, const std::string& response) {
  std::lock_guard lock(mutex_);
  if (!seen_.add(digest, response)) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(Errc::io_error, "cannot append to transcript: " + path_);
  out << json{{"request_digest", digest}, {"response_text", response}}.dump() << '\n';
}

}  // namespace claimcheck::llm
