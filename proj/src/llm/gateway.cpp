#include "claimcheck/llm/gateway.hpp"

#include <algorithm>
#include <thread>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/llm/transcript.hpp"

namespace claimcheck::llm {

RateLimiter::RateLimiter(double requests_per_second) {
  if (requests_per_second > 0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / requests_per_second));
  }
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_slot_);
    next_slot_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, GatewayOptions options)
    : provider_(std::move(provider)),
      options_(options),
      in_flight_(std::max(1, options.max_in_flight)),
      limiter_(options.requests_per_second) {
  if (!provider_) throw Error(Errc::invalid_argument, "gateway needs a provider");
}

LlmResponse Gateway::complete(TemplateName name, const std::string& prompt) {
  ChatRequest request{name, prompt, request_digest(name, prompt)};
  LlmResponse response;
  const int max_attempts = 1 + std::max(0, options_.max_retries);
  std::string last_error;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    response.attempt_count = attempt;
    limiter_.acquire();
    in_flight_.acquire();
    try {
      response.raw_text = provider_->complete(request);
      in_flight_.release();
      return response;
    } catch (const TransientError& e) {
      in_flight_.release();
      last_error = e.what();
    } catch (...) {
      in_flight_.release();
      throw;
    }
    if (attempt < max_attempts && options_.retry_backoff.count() > 0) {
      std::this_thread::sleep_for(options_.retry_backoff * (1 << std::min(attempt - 1, 6)));
    }
  }
  throw Error(Errc::transport_exhausted, "provider " + provider_->name() + " failed after " +
                                             std::to_string(max_attempts) +
                                             " attempts: " + last_error);
}

LlmResponse Gateway::ask(TemplateName name, const std::string& prompt, int max_reasks) {
  std::string current = prompt;
  LlmResponse response;
  for (int ask = 0; ask <= std::max(0, max_reasks); ++ask) {
    const LlmResponse raw = complete(name, current);
    response = parse_schema(name, raw.raw_text);
    response.attempt_count = raw.attempt_count;
    if (response.parse_ok()) return response;
    current = reask_prompt(prompt, kFormatReaskNote, ask + 1);
  }
  return response;
}

}  // namespace claimcheck::llm
