#include "claimcheck/service/config.hpp"

#include <fstream>

#include "claimcheck/core/errors.hpp"

namespace claimcheck::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void resolve(std::string& path, const fs::path& base) {
  if (path.empty() || base.empty()) return;
  if (fs::path(path).is_relative()) path = (base / path).lexically_normal().string();
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json& j, const fs::path& base) {
  if (!j.is_object()) throw Error(Errc::parse_failure, "config must be a JSON object");
  ServiceConfig c;
  try {
    if (j.contains("providers")) {
      const json& p = j["providers"];
      if (p.is_array()) {
        if (p.empty()) throw Error(Errc::invalid_argument, "providers list is empty");
        c.provider = llm::ProviderConfig::from_json(p.front());
      } else {
        c.provider = llm::ProviderConfig::from_json(p);
      }
    }
    for (const auto& b : j.value("backends", json::array())) {
      c.backends.push_back(retrieval::BackendConfig::from_json(b));
    }
    if (j.contains("policy")) c.policy = retrieval::FilterPolicy::from_json(j["policy"]);

    if (j.contains("aggregation")) {
      const json& a = j["aggregation"];
      if (a.is_string()) {
        c.mode = aggregation::article_mode_from_string(a.get<std::string>());
      } else {
        if (a.contains("mode")) c.mode = aggregation::article_mode_from_string(a["mode"].get<std::string>());
        c.registry_path = a.value("registry", "");
        c.default_tier = a.value("default_tier", aggregation::kDefaultTier);
        c.model_path = a.value("model", "");
        if (a.contains("tier_weights")) {
          const auto w = a["tier_weights"].get<std::vector<double>>();
          if (w.size() != 5) throw Error(Errc::invalid_argument, "tier_weights needs 5 numbers");
          std::copy(w.begin(), w.end(), c.tier_weights.begin());
        }
      }
    }
    if (j.contains("pipeline")) {
      const json& p = j["pipeline"];
      c.min_relevant = p.value("min_relevant", c.min_relevant);
      c.prescreen = p.value("prescreen", c.prescreen);
      c.result_token_budget = p.value("result_token_budget", c.result_token_budget);
      c.extraction_only = p.value("extraction_only", c.extraction_only);
    }
    c.data_dir = j.value("data_dir", c.data_dir);
    if (j.contains("service")) {
      const json& s = j["service"];
      c.workers = s.value("workers", c.workers);
      c.host = s.value("host", c.host);
      c.port = s.value("port", c.port);
      c.static_dir = s.value("static_dir", c.static_dir);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad config: ") + e.what());
  }
  if (c.workers == 0) throw Error(Errc::invalid_argument, "service.workers must be positive");
  if (c.min_relevant == 0) throw Error(Errc::invalid_argument, "pipeline.min_relevant must be positive");
  c.policy.validate();

  resolve(c.provider.transcript, base);
  resolve(c.provider.script, base);
  resolve(c.provider.record_to, base);
  for (auto& b : c.backends) {
    resolve(b.corpus, base);
    resolve(b.transcript, base);
    resolve(b.record_to, base);
  }
  resolve(c.registry_path, base);
  resolve(c.model_path, base);
  resolve(c.data_dir, base);
  resolve(c.static_dir, base);
  return c;
}

ServiceConfig ServiceConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, path + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path());
}

aggregation::CredibilityRegistry load_registry(const ServiceConfig& config) {
  if (config.registry_path.empty()) return aggregation::CredibilityRegistry({}, config.default_tier);
  return aggregation::CredibilityRegistry::load_tsv(config.registry_path, config.default_tier);
}

aggregation::ClaimScorer make_scorer(const ServiceConfig& config) {
  if (config.model_path.empty()) return aggregation::ClaimScorer(config.tier_weights);
  return aggregation::ClaimScorer(aggregation::GbdtModel::load(config.model_path),
                                  config.tier_weights);
}

PipelineOptions pipeline_options(const ServiceConfig& config) {
  PipelineOptions o;
  o.mode = config.mode;
  o.extraction_only = config.extraction_only;
  o.pool.min_relevant = config.min_relevant;
  o.verifier.prescreen = config.prescreen;
  o.verifier.result_token_budget = config.result_token_budget;
  return o;
}

std::shared_ptr<Pipeline> build_pipeline(const ServiceConfig& config) {
  auto gateway = std::make_shared<llm::Gateway>(llm::make_provider(config.provider),
                                                config.provider.gateway);
  std::vector<std::shared_ptr<retrieval::SearchBackend>> backends;
  for (const auto& b : config.backends) backends.push_back(retrieval::make_backend(b));
  return std::make_shared<Pipeline>(std::move(gateway), std::move(backends), config.policy,
                                    load_registry(config), make_scorer(config),
                                    pipeline_options(config));
}

}  // namespace claimcheck::service
