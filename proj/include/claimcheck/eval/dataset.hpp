#pragma once

#include <optional>
#include <string>
#include <vector>

namespace claimcheck::eval {

struct LabeledExample {
  std::string id;
  std::string text;
  int gold_label = 0;  // kReal or kFake
  std::string source;
  std::optional<std::string> split_key;
};

// JSONL of {id, text, label, source, split_key?}. label may be 0/1, a
// boolean, or one of "real", "true", "fake", "false". Throws
// Error(io_error) or Error(parse_failure).
std::vector<LabeledExample> load_dataset(const std::string& path);

std::vector<int> gold_labels(const std::vector<LabeledExample>& examples);

}  // namespace claimcheck::eval
