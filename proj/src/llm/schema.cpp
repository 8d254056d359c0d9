#include "claimcheck/llm/schema.hpp"

#include <json.hpp>

#include "claimcheck/core/text.hpp"

namespace claimcheck::llm {

using nlohmann::json;

namespace {

std::optional<std::size_t> matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

struct SchemaError {
  std::string message;
};

std::string required_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError{std::string("missing key \"") + key + "\""};
  if (!it->is_string()) throw SchemaError{std::string("key \"") + key + "\" is not a string"};
  return it->get<std::string>();
}

std::string enum_token(const json& obj, const char* key) {
  return core::casefold(core::trim(required_string(obj, key)));
}

bool yes_no(const json& obj, const char* key) {
  const std::string v = enum_token(obj, key);
  if (v == "yes") return true;
  if (v == "no") return false;
  throw SchemaError{std::string("key \"") + key + "\" must be \"yes\" or \"no\""};
}

std::string non_empty(std::string s, const char* what) {
  std::string t(core::trim(s));
  if (t.empty()) throw SchemaError{std::string(what) + " is empty"};
  return t;
}

ParsedOutput parse_object(TemplateName name, const json& obj) {
  switch (name) {
    case TemplateName::main_claim:
      return MainClaimOutput{non_empty(required_string(obj, "key_claim"), "key_claim")};

    case TemplateName::key_claims: {
      auto it = obj.find("key_claims");
      if (it == obj.end() || !it->is_array()) throw SchemaError{"\"key_claims\" must be a list"};
      KeyClaimsOutput out;
      for (const auto& entry : *it) {
        if (entry.is_string()) {
          out.claims.push_back(non_empty(entry.get<std::string>(), "claim"));
        } else if (entry.is_object()) {
          out.claims.push_back(non_empty(required_string(entry, "claim"), "claim"));
        } else {
          throw SchemaError{"key_claims entries must be {\"claim\": ...}"};
        }
      }
      if (out.claims.empty()) throw SchemaError{"\"key_claims\" is empty"};
      return out;
    }

    case TemplateName::query_gen: {
      auto it = obj.find("query");
      if (it == obj.end()) it = obj.find("queries");
      if (it == obj.end()) throw SchemaError{"missing key \"query\""};
      QueryOutput out;
      if (it->is_string()) {
        out.queries.push_back(non_empty(it->get<std::string>(), "query"));
      } else if (it->is_array()) {
        for (const auto& q : *it) {
          if (!q.is_string()) throw SchemaError{"queries must be strings"};
          out.queries.push_back(non_empty(q.get<std::string>(), "query"));
        }
      } else {
        throw SchemaError{"\"query\" must be a string or a list of strings"};
      }
      if (out.queries.empty()) throw SchemaError{"no queries"};
      return out;
    }

    case TemplateName::verify: {
      VerifyOutput out;
      const std::string label = enum_token(obj, "support_or_negate_or_baseless");
      const auto parsed_label = core::try_label(label);
      if (!parsed_label) throw SchemaError{"label \"" + label + "\" is not support/negate/baseless"};
      const std::string confidence = enum_token(obj, "confidence");
      const auto parsed_conf = core::try_confidence(confidence);
      if (!parsed_conf) throw SchemaError{"confidence \"" + confidence + "\" is not high/medium/low"};
      out.label = *parsed_label;
      out.confidence = *parsed_conf;
      out.rationale = std::string(core::trim(required_string(obj, "rationale")));
      if (out.label != core::VerdictLabel::baseless && out.rationale.empty()) {
        throw SchemaError{"rationale is required for support and negate"};
      }
      return out;
    }

    case TemplateName::relevance:
      return RelevanceOutput{yes_no(obj, "about_the_same_news_story"),
                             yes_no(obj, "contains_related_content")};
  }
  throw SchemaError{"unknown template"};
}

}  // namespace

std::optional<std::string> first_json_object(std::string_view raw) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos;
       open = raw.find('{', open + 1)) {
    const auto close = matching_brace(raw, open);
    if (!close) continue;
    const std::string_view candidate = raw.substr(open, *close - open + 1);
    const json parsed = json::parse(candidate, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded() && parsed.is_object()) return std::string(candidate);
  }
  return std::nullopt;
}

LlmResponse parse_schema(TemplateName name, std::string_view raw) {
  LlmResponse response;
  response.raw_text = std::string(raw);
  const auto object_text = first_json_object(raw);
  if (!object_text) {
    response.parse_error = "no JSON object in model output";
    return response;
  }
  try {
    response.parsed = parse_object(name, json::parse(*object_text));
  } catch (const SchemaError& e) {
    response.parse_error = e.message;
  } catch (const json::exception& e) {
    response.parse_error = e.what();
  }
  return response;
}

}  // namespace claimcheck::llm
