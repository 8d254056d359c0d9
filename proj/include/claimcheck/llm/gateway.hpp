#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>

#include "claimcheck/llm/prompts.hpp"
#include "claimcheck/llm/provider.hpp"
#include "claimcheck/llm/schema.hpp"

namespace claimcheck::llm {

struct GatewayOptions {
  int max_in_flight = 4;
  // Retries after the first attempt on TransientError.
  int max_retries = 3;
  // 0 disables rate limiting.
  double requests_per_second = 0.0;
  std::chrono::milliseconds retry_backoff{200};
};

// Spaces request start times at least 1/rate apart.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);
  void acquire();

 private:
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_slot_{};
  std::mutex mutex_;
};

// Front door to a chat provider: bounded concurrency, rate limiting, retry on
// transient failures, and schema parsing with re-asks.
class Gateway {
 public:
  Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options = {});

  // One model call with transport retries. The response is unparsed
  // (parse_ok() == false). Throws Error(transport_exhausted) once retries run
  // out and propagates non-transient errors such as Error(transcript_miss).
  LlmResponse complete(TemplateName name, const std::string& prompt);

  // complete() followed by parse_schema(). On a parse failure the prompt is
  // re-sent with a format note, up to `max_reasks` more times; the last
  // response is returned whether or not it parsed.
  LlmResponse ask(TemplateName name, const std::string& prompt, int max_reasks);

  const GatewayOptions& options() const { return options_; }
  ChatProvider& provider() { return *provider_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  GatewayOptions options_;
  std::counting_semaphore<1 << 20> in_flight_;
  RateLimiter limiter_;
};

}  // namespace claimcheck::llm
