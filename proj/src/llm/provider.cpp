#include "claimcheck/llm/provider.hpp"

#include <fstream>
#include <json.hpp>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::llm {

using nlohmann::json;

std::string ReplayProvider::complete(const ChatRequest& request) {
  if (auto hit = transcript_.find(request.digest)) return *hit;
  throw Error(Errc::transcript_miss, "no transcript entry for " + std::string(to_string(
                                         request.template_name)) + " request " + request.digest);
}

RecordingProvider::RecordingProvider(std::shared_ptr<ChatProvider> inner,
                                     std::string transcript_path)
    : inner_(std::move(inner)), writer_(std::move(transcript_path)) {}

std::string RecordingProvider::complete(const ChatRequest& request) {
  std::string response = inner_->complete(request);
  writer_.append(request.digest, response);
  return response;
}

ScriptedProvider ScriptedProvider::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open script: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(Errc::parse_failure, "script must be a JSON array: " + path);
  }
  std::vector<Rule> rules;
  for (const auto& r : doc) {
    Rule rule;
    if (r.contains("template")) rule.template_name = template_from_string(r["template"].get<std::string>());
    for (const auto& needle : r.value("contains", json::array())) {
      rule.contains.push_back(needle.get<std::string>());
    }
    const json& response = r.at("response");
    rule.response = response.is_string() ? response.get<std::string>() : response.dump();
    rules.push_back(std::move(rule));
  }
  return ScriptedProvider(std::move(rules));
}

std::string ScriptedProvider::complete(const ChatRequest& request) {
  for (const Rule& rule : rules_) {
    if (rule.template_name && *rule.template_name != request.template_name) continue;
    bool all = true;
    for (const auto& needle : rule.contains) {
      if (request.prompt.find(needle) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (all) return rule.response;
  }
  throw Error(Errc::transcript_miss, "no scripted rule matches " +
                                         std::string(to_string(request.template_name)) + " request");
}

}  // namespace claimcheck::llm
