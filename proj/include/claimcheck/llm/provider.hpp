#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "claimcheck/llm/prompts.hpp"
#include "claimcheck/llm/transcript.hpp"

namespace claimcheck::llm {

struct ChatRequest {
  TemplateName template_name = TemplateName::main_claim;
  std::string prompt;
  // request_digest(template_name, prompt); the replay key.
  std::string digest;
};

// Retryable transport failure (connection refused, timeout, 429, 5xx).
class TransientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chat-completion backend. Implementations must tolerate concurrent calls.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string name() const = 0;
  // Returns the raw completion text. Throws TransientError for retryable
  // failures and claimcheck::Error for everything else.
  virtual std::string complete(const ChatRequest& request) = 0;
};

// Serves transcript entries by request digest; unknown digests throw
// Error(transcript_miss).
class ReplayProvider final : public ChatProvider {
 public:
  explicit ReplayProvider(Transcript transcript) : transcript_(std::move(transcript)) {}

  std::string name() const override { return "replay"; }
  std::string complete(const ChatRequest& request) override;

  const Transcript& transcript() const { return transcript_; }

 private:
  Transcript transcript_;
};

// Forwards to an inner provider and appends every successful exchange to a
// JSONL transcript file.
class RecordingProvider final : public ChatProvider {
 public:
  RecordingProvider(std::shared_ptr<ChatProvider> inner, std::string transcript_path);

  std::string name() const override { return inner_->name(); }
  std::string complete(const ChatRequest& request) override;

 private:
  std::shared_ptr<ChatProvider> inner_;
  TranscriptWriter writer_;
};

// Rule-based canned responder, used to author fixture transcripts. The first
// rule whose template matches and whose every `contains` needle occurs in the
// prompt wins.
class ScriptedProvider final : public ChatProvider {
 public:
  struct Rule {
    std::optional<TemplateName> template_name;
    std::vector<std::string> contains;
    std::string response;
  };

  explicit ScriptedProvider(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  // JSON array of {"template"?, "contains"?: [..], "response": string|object}.
  static ScriptedProvider from_file(const std::string& path);

  std::string name() const override { return "scripted"; }
  std::string complete(const ChatRequest& request) override;

 private:
  std::vector<Rule> rules_;
};

// Adapts a callable; handy for tests and fault injection.
class FunctionProvider final : public ChatProvider {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;

  explicit FunctionProvider(Fn fn, std::string name = "function")
      : fn_(std::move(fn)), name_(std::move(name)) {}

  std::string name() const override { return name_; }
  std::string complete(const ChatRequest& request) override { return fn_(request); }

 private:
  Fn fn_;
  std::string name_;
};

}  // namespace claimcheck::llm
