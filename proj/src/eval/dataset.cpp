#include "claimcheck/eval/dataset.hpp"

#include <fstream>

#include <json.hpp>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"
#include "claimcheck/eval/metrics.hpp"

namespace claimcheck::eval {

namespace {

int parse_label(const nlohmann::json& j) {
  if (j.is_boolean()) return j.get<bool>() ? kReal : kFake;
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v == kReal || v == kFake) return v;
  }
  if (j.is_string()) {
    const std::string s = core::casefold(core::trim(j.get<std::string>()));
    if (s == "real" || s == "true") return kReal;
    if (s == "fake" || s == "false") return kFake;
  }
  throw Error(Errc::parse_failure, "label must be binary: " + j.dump());
}

}  // namespace

std::vector<LabeledExample> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read dataset " + path);
  std::vector<LabeledExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (core::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      LabeledExample e;
      e.id = j.at("id").get<std::string>();
      e.text = j.at("text").get<std::string>();
      e.gold_label = parse_label(j.at("label"));
      e.source = j.value("source", "");
      if (j.contains("split_key") && !j.at("split_key").is_null()) {
        e.split_key = j.at("split_key").get<std::string>();
      }
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse_failure, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<int> gold_labels(const std::vector<LabeledExample>& examples) {
  std::vector<int> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.gold_label);
  return out;
}

}  // namespace claimcheck::eval
