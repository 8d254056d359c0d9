#include "claimcheck/llm/prompts.hpp"

#include <algorithm>
#include <array>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::llm {

namespace {

constexpr std::string_view kMainClaim =
    "Given the input content below, please summarize the single key claim.\n"
    "Input content: {content}\n"
    "Please output with the follow json format {{\"key_claim\": XXX}}.\n"
    "Please output now:";

constexpr std::string_view kKeyClaims =
    "Given the input content below, please extract distinct key claims. The key claims should "
    "be concrete enough containing clear context so that it can be efficiently verified.\n"
    "Input content: {content}\n"
    "Please output with the follow json format {{\"key_claims\": [{{\"claim\": XXX}}, ...]}}.\n"
    "Please output now:";

constexpr std::string_view kQueryGen =
    "Given the claim below, please generate a Google query which can be used to search content "
    "to verify this claim.\n"
    "Claim: {claim}\n"
    "Please output with the following JSON format {{\"query\": \"XXX\"}}\n"
    "Please output now:";

constexpr std::string_view kVerify =
    "Below is one web search result\n"
    "Search Result:\n"
    "{search_result}\n"
    "Below is a claim to be verified\n"
    "Claim: {claim}\n"
    "Please perform the following rules to generate an output with this json format : "
    "{{\"support_or_negate_or_baseless\": \"support\" or \"negate\" or \"baseless\", "
    "\"confidence\": \"high\" or \"medium\" or \"low\", \"rationale\": \"XXX\"}}\n"
    "Rule 1: if the search result content support the claim, set the "
    "\"support_or_negate_or_baseless\" field as \"support\", and offer a confident score and a "
    "rationale.\n"
    "Rule 2: if the search result content negate the claim, set the "
    "\"support_or_negate_or_baseless\" field as \"negate\", and offer a confident score and a "
    "rationale.\n"
    "Rule 3: if the search result content cannot either support or negate the claim, set the "
    "\"support_or_negate_or_baseless\" field as \"baseless\", and offer a confident score and a "
    "rationale.\n"
    "To clarify: if the content of the search results does not contradict the claim, but lacks "
    "some or all of the information presented in the claim, please use the label \"baseless\" "
    "rather than \"negate\".\n"
    "Please output now:";

constexpr std::string_view kRelevance =
    "Below is one web search result.\n"
    "Search Result: {search_result}\n"
    "Below is a claim:\n"
    "Claim:  {claim}\n"
    "Please make the following two investigations:\n"
    "1. Please check if the news article and the search result is about the same news story.\n"
    "2. Please check if the search result contains content (facts, opinions, or claims) related "
    "to the news article.\n"
    "Please output with the following json format :\n"
    "{{\"about_the_same_news_story\": \"yes\" or \"no\", \"contains_related_content\": \"yes\" "
    "or \"no\"}}\n"
    "Please output now:";

const std::array<PromptTemplate, 5> kTemplates = {{
    {TemplateName::main_claim, kMainClaim},
    {TemplateName::key_claims, kKeyClaims},
    {TemplateName::query_gen, kQueryGen},
    {TemplateName::verify, kVerify},
    {TemplateName::relevance, kRelevance},
}};

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// Calls on_literal / on_placeholder for each piece of the template.
template <typename Literal, typename Placeholder>
void scan(std::string_view text, Literal&& on_literal, Placeholder&& on_placeholder) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
      on_literal(std::string_view(&text[i], 1));
      i += 2;
      continue;
    }
    if (c == '{') {
      std::size_t j = i + 1;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      if (j < text.size() && text[j] == '}' && j > i + 1) {
        on_placeholder(text.substr(i + 1, j - i - 1));
        i = j + 1;
        continue;
      }
    }
    on_literal(text.substr(i, 1));
    ++i;
  }
}

}  // namespace

std::string_view to_string(TemplateName name) {
  switch (name) {
    case TemplateName::main_claim: return "main_claim";
    case TemplateName::key_claims: return "key_claims";
    case TemplateName::query_gen: return "query_gen";
    case TemplateName::verify: return "verify";
    case TemplateName::relevance: return "relevance";
  }
  return "main_claim";
}

TemplateName template_from_string(std::string_view s) {
  for (const auto& t : kTemplates) {
    if (to_string(t.name) == s) return t.name;
  }
  throw Error(Errc::parse_failure, "unknown template name: " + std::string(s));
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> names;
  scan(
      template_text, [](std::string_view) {},
      [&](std::string_view name) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
          names.emplace_back(name);
        }
      });
  return names;
}

const PromptTemplate& prompt_template(TemplateName name) {
  return kTemplates[static_cast<std::size_t>(name)];
}

std::string render(const PromptTemplate& tmpl, const Bindings& bindings) {
  for (const auto& name : tmpl.placeholders()) {
    if (bindings.find(name) == bindings.end()) {
      throw Error(Errc::missing_placeholder, name);
    }
  }
  std::string out;
  out.reserve(tmpl.template_text.size() + 256);
  scan(
      tmpl.template_text, [&](std::string_view lit) { out.append(lit); },
      [&](std::string_view name) { out.append(bindings.find(name)->second); });
  return out;
}

std::string reask_prompt(std::string_view prompt, std::string_view note, int reask_number) {
  std::string out(prompt);
  out.append("\n\nCorrection ");
  out.append(std::to_string(reask_number));
  out.append(": ");
  out.append(note);
  out.append("\nPlease output now:");
  return out;
}

}  // namespace claimcheck::llm
