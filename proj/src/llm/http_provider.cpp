#include "claimcheck/llm/http_provider.hpp"

#include <httplib.h>

#include <cstdlib>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::llm {

using nlohmann::json;

UrlParts split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(Errc::invalid_argument, "URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

HttpChatProvider::HttpChatProvider(std::string endpoint, std::string model,
                                   std::optional<std::string> api_key,
                                   std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {}

std::string HttpChatProvider::complete(const ChatRequest& request) {
  const UrlParts parts = split_url(endpoint_);
  httplib::Client client(parts.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers;
  if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);

  const json body{{"model", model_},
                  {"temperature", 0},
                  {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})}};
  auto res = client.Post(parts.path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransientError("transport error: " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransientError("HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(Errc::transport_exhausted,
                "non-retryable HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  const json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw TransientError("provider returned non-JSON body");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw TransientError("provider reply has no choices[0].message.content");
  }
}

ProviderConfig ProviderConfig::from_json(const json& j) {
  if (j.contains("api_key")) {
    throw Error(Errc::invalid_argument,
                "provider config must not contain api_key; set api_key_env instead");
  }
  ProviderConfig c;
  c.kind = j.value("kind", c.kind);
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.transcript = j.value("transcript", c.transcript);
  c.script = j.value("script", c.script);
  c.record_to = j.value("record_to", c.record_to);
  c.gateway.max_in_flight = j.value("max_in_flight", c.gateway.max_in_flight);
  c.gateway.max_retries = j.value("max_retries", c.gateway.max_retries);
  c.gateway.requests_per_second = j.value("requests_per_second", c.gateway.requests_per_second);
  c.gateway.retry_backoff =
      std::chrono::milliseconds(j.value("retry_backoff_ms", c.gateway.retry_backoff.count()));
  if (c.gateway.max_in_flight < 1) throw Error(Errc::invalid_argument, "max_in_flight must be >= 1");
  if (c.gateway.max_retries < 0) throw Error(Errc::invalid_argument, "max_retries must be >= 0");
  return c;
}

std::shared_ptr<ChatProvider> make_provider(const ProviderConfig& config) {
  std::shared_ptr<ChatProvider> provider;
  if (config.kind == "http") {
    if (config.endpoint.empty() || config.model.empty()) {
      throw Error(Errc::invalid_argument, "http provider needs endpoint and model");
    }
    std::optional<std::string> key;
    if (const char* v = std::getenv(config.api_key_env.c_str()); v && *v) key = v;
    provider = std::make_shared<HttpChatProvider>(config.endpoint, config.model, key);
  } else if (config.kind == "replay") {
    provider = std::make_shared<ReplayProvider>(Transcript::load(config.transcript));
  } else if (config.kind == "scripted") {
    provider = std::make_shared<ScriptedProvider>(ScriptedProvider::from_file(config.script));
  } else {
    throw Error(Errc::invalid_argument, "unknown provider kind: " + config.kind);
  }
  if (!config.record_to.empty()) {
    provider = std::make_shared<RecordingProvider>(provider, config.record_to);
  }
  return provider;
}

}  // namespace claimcheck::llm
