#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "claimcheck/llm/gateway.hpp"
#include "claimcheck/llm/provider.hpp"

namespace claimcheck::llm {

// Splits "https://host:port/path?x" into the "https://host:port" origin and
// the "/path?x" remainder used by the HTTP client.
struct UrlParts {
  std::string origin;
  std::string path;
};
UrlParts split_url(const std::string& url);

// OpenAI-compatible chat completion endpoint:
// POST {endpoint} {"model", "temperature": 0, "messages": [{"role": "user", ...}]}
// and read choices[0].message.content.
class HttpChatProvider final : public ChatProvider {
 public:
  HttpChatProvider(std::string endpoint, std::string model, std::optional<std::string> api_key,
                   std::chrono::seconds timeout = std::chrono::seconds(120));

  std::string name() const override { return "http:" + model_; }
  std::string complete(const ChatRequest& request) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::optional<std::string> api_key_;
  std::chrono::seconds timeout_;
};

// Provider section of the service/CLI config.
//   kind: "http" | "replay" | "scripted"
//   endpoint, model, api_key_env (http); transcript (replay); script (scripted)
//   max_in_flight, max_retries, requests_per_second
//   record_to: optional transcript path that captures every exchange
// A literal "api_key" is rejected: keys come from the environment only.
struct ProviderConfig {
  std::string kind = "replay";
  std::string endpoint;
  std::string model;
  std::string api_key_env = "OPENAI_API_KEY";
  std::string transcript;
  std::string script;
  std::string record_to;
  GatewayOptions gateway;

  static ProviderConfig from_json(const nlohmann::json& j);
};

std::shared_ptr<ChatProvider> make_provider(const ProviderConfig& config);

}  // namespace claimcheck::llm
