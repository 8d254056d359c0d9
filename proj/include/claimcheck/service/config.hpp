#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/aggregation/aggregate.hpp"
#include "claimcheck/llm/http_provider.hpp"
#include "claimcheck/retrieval/backend.hpp"
#include "claimcheck/retrieval/policy.hpp"
#include "claimcheck/service/pipeline.hpp"

namespace claimcheck::service {

// JSON config shared by the CLI and the server. Relative paths are resolved
// against the config file's directory.
//   providers    one provider object, or a list whose first entry is used
//   backends     list of search backends
//   policy       FilterPolicy overrides
//   aggregation  "main" | "all", or {mode, registry, default_tier, model, tier_weights}
//   pipeline     {min_relevant, prescreen, result_token_budget, extraction_only}
//   data_dir     job store location
//   service      {workers, host, port, static_dir}
struct ServiceConfig {
  llm::ProviderConfig provider;
  std::vector<retrieval::BackendConfig> backends;
  retrieval::FilterPolicy policy;
  aggregation::ArticleMode mode = aggregation::ArticleMode::main_claim;
  std::string registry_path;
  int default_tier = aggregation::kDefaultTier;
  std::string model_path;
  aggregation::TierWeights tier_weights = aggregation::kDefaultTierWeights;
  std::size_t min_relevant = retrieval::kDefaultMinRelevant;
  bool prescreen = false;
  std::size_t result_token_budget = 3000;
  bool extraction_only = false;
  std::string data_dir = "claimcheck-data";
  std::size_t workers = 4;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;

  // Throws Error(parse_failure) or Error(invalid_argument).
  static ServiceConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  // Throws Error(io_error) when unreadable.
  static ServiceConfig load(const std::string& path);
};

aggregation::CredibilityRegistry load_registry(const ServiceConfig& config);
aggregation::ClaimScorer make_scorer(const ServiceConfig& config);
PipelineOptions pipeline_options(const ServiceConfig& config);
std::shared_ptr<Pipeline> build_pipeline(const ServiceConfig& config);

}  // namespace claimcheck::service
