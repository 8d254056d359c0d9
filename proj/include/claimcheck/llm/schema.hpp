#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "claimcheck/core/types.hpp"
#include "claimcheck/llm/prompts.hpp"

namespace claimcheck::llm {

struct MainClaimOutput {
  std::string key_claim;
  friend bool operator==(const MainClaimOutput&, const MainClaimOutput&) = default;
};

struct KeyClaimsOutput {
  std::vector<std::string> claims;
  friend bool operator==(const KeyClaimsOutput&, const KeyClaimsOutput&) = default;
};

struct QueryOutput {
  std::vector<std::string> queries;
  friend bool operator==(const QueryOutput&, const QueryOutput&) = default;
};

struct VerifyOutput {
  core::VerdictLabel label = core::VerdictLabel::baseless;
  core::Confidence confidence = core::Confidence::low;
  std::string rationale;
  friend bool operator==(const VerifyOutput&, const VerifyOutput&) = default;
};

struct RelevanceOutput {
  bool same_story = false;
  bool related = false;
  friend bool operator==(const RelevanceOutput&, const RelevanceOutput&) = default;
};

using ParsedOutput = std::variant<std::monostate, MainClaimOutput, KeyClaimsOutput, QueryOutput,
                                  VerifyOutput, RelevanceOutput>;

struct LlmResponse {
  std::string raw_text;
  ParsedOutput parsed;
  std::string parse_error;
  int attempt_count = 0;

  bool parse_ok() const { return parsed.index() != 0; }

  template <typename T>
  const T& as() const {
    return std::get<T>(parsed);
  }

  friend bool operator==(const LlmResponse&, const LlmResponse&) = default;
};

// The substring of `raw` holding the first balanced {...} span that parses as
// a JSON object. Prose and markdown fences around it are ignored.
std::optional<std::string> first_json_object(std::string_view raw);

// Validates the object against the template's declared output schema.
// Failures leave `parsed` empty and describe the problem in `parse_error`.
LlmResponse parse_schema(TemplateName name, std::string_view raw);

}  // namespace claimcheck::llm
