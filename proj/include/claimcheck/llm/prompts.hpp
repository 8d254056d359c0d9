#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace claimcheck::llm {

enum class TemplateName { main_claim, key_claims, query_gen, verify, relevance };

std::string_view to_string(TemplateName name);
TemplateName template_from_string(std::string_view s);  // throws Error(parse_failure)

// A prompt in str.format() notation: "{name}" is a placeholder, "{{" and "}}"
// are literal braces.
struct PromptTemplate {
  TemplateName name;
  std::string_view template_text;

  // Placeholder names in order of first appearance.
  std::vector<std::string> placeholders() const;
};

const PromptTemplate& prompt_template(TemplateName name);

using Bindings = std::map<std::string, std::string, std::less<>>;

// Substitutes every placeholder verbatim and collapses doubled braces.
// Throws Error(missing_placeholder) naming the first unbound placeholder.
std::string render(const PromptTemplate& tmpl, const Bindings& bindings);

// Follow-up prompt sent after an unusable answer: the original prompt plus a
// numbered correction note. Numbering keeps successive re-asks distinct
// replay keys.
std::string reask_prompt(std::string_view prompt, std::string_view note, int reask_number = 1);

inline constexpr std::string_view kFormatReaskNote =
    "Your previous output did not follow the required json format. Output only the json object.";
inline constexpr std::string_view kSelfContainedReaskNote =
    "The claim must be self-contained: name the subject explicitly instead of using a pronoun, "
    "and state it as a complete sentence.";

}  // namespace claimcheck::llm
