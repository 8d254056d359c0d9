// claimcheck command line: verify, extract, train, evaluate, serve, metrics,
// featurize.
#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "claimcheck/aggregation/features.hpp"
#include "claimcheck/aggregation/gbdt.hpp"
#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/json.hpp"
#include "claimcheck/core/report.hpp"
#include "claimcheck/core/text.hpp"
#include "claimcheck/eval/cv.hpp"
#include "claimcheck/eval/metrics.hpp"
#include "claimcheck/eval/rouge.hpp"
#include "claimcheck/extraction/extractor.hpp"
#include "claimcheck/service/config.hpp"
#include "claimcheck/service/http_api.hpp"

using namespace claimcheck;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// JSON {id?, title?, body} or plain text (first line is the title when
// followed by a blank line).
core::NewsArticle read_article(const std::string& path) {
  const std::string text = slurp(path);
  core::NewsArticle a;
  const json j = json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_object()) {
    a.id = j.value("id", "");
    a.title = j.value("title", "");
    a.body = j.value("body", "");
    if (j.contains("url")) a.url = j["url"].get<std::string>();
  } else if (auto split = text.find("\n\n"); split != std::string::npos &&
                                            text.substr(0, split).find('\n') == std::string::npos) {
    a.title = text.substr(0, split);
    a.body = text.substr(split + 2);
  } else {
    a.body = text;
  }
  if (a.id.empty()) a.id = "art-" + core::sha256_hex(a.title + "\n" + a.body).substr(0, 16);
  return a;
}

// One integer label per line, or a JSON array.
std::vector<int> read_labels(const std::string& path) {
  const std::string text = slurp(path);
  const json j = json::parse(text, nullptr, false);
  if (!j.is_discarded() && j.is_array()) return j.get<std::vector<int>>();
  std::vector<int> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto t = core::trim(line);
    if (t.empty()) continue;
    if (t == "real" || t == "true") out.push_back(eval::kReal);
    else if (t == "fake" || t == "false") out.push_back(eval::kFake);
    else out.push_back(std::stoi(std::string(t)));
  }
  return out;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  out << text << "\n";
  if (!out) throw Error(Errc::io_error, "cannot write " + out_path);
}

service::ServiceConfig load_config(const std::string& path) {
  return path.empty() ? service::ServiceConfig{} : service::ServiceConfig::load(path);
}

service::HttpApi* g_api = nullptr;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claimcheck: retrieval-augmented news claim verification"};
  app.require_subcommand(1);

  // verify
  std::string article_path, config_path, mode, replay, out_path, corpus, registry;
  bool extraction_only = false;
  auto* verify = app.add_subcommand("verify", "Verify one article and print its report");
  verify->add_option("file", article_path, "Article JSON or text file")->required();
  verify->add_option("--config", config_path, "Config file");
  verify->add_option("--mode", mode, "Article decision: main | all")
      ->check(CLI::IsMember({"main", "all", "main_claim", "min_over_claims"}));
  verify->add_option("--replay", replay, "Serve model calls from this transcript");
  verify->add_option("--corpus", corpus, "Use this fixture corpus as the only backend");
  verify->add_option("--registry", registry, "Credibility registry TSV");
  verify->add_flag("--extraction-only", extraction_only, "Stop after claim extraction");
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  // extract
  auto* extract = app.add_subcommand("extract", "Print the main claim and key claims");
  extract->add_option("file", article_path, "Article JSON or text file")->required();
  extract->add_option("--config", config_path, "Config file");
  extract->add_option("--replay", replay, "Serve model calls from this transcript");

  // train
  std::string data_path, model_out;
  aggregation::GbdtParams params;
  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--rounds", params.n_rounds, "Boosting rounds");
    cmd->add_option("--depth", params.max_depth, "Maximum tree depth");
    cmd->add_option("--lr", params.learning_rate, "Learning rate");
    cmd->add_option("--min-leaf", params.min_leaf, "Minimum rows per leaf");
    cmd->add_option("--lambda", params.lambda, "L2 penalty on leaf values");
  };
  auto* train = app.add_subcommand("train", "Train the claim classifier");
  train->add_option("--data", data_path, "Training rows JSONL")->required();
  train->add_option("--out", model_out, "Model output path")->required();
  add_params(train);

  // evaluate
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool as_json = false;
  auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold cross-validation");
  evaluate->add_option("--data", data_path, "Training rows JSONL")->required();
  evaluate->add_option("--folds", folds, "Number of folds");
  evaluate->add_option("--seed", seed, "Shuffle seed");
  evaluate->add_flag("--json", as_json, "Print JSON instead of a table");
  add_params(evaluate);

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "Config file")->required();

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Text and label metrics");
  metrics->require_subcommand(1);
  std::string variant = "r1", candidate, reference, pred_path, gold_path;
  auto* m_rouge = metrics->add_subcommand("rouge", "ROUGE between two strings");
  m_rouge->add_option("--variant", variant, "r1 | r2 | rl");
  m_rouge->add_option("--candidate", candidate, "Candidate text")->required();
  m_rouge->add_option("--reference", reference, "Reference text")->required();
  auto* m_f1 = metrics->add_subcommand("f1", "Micro-F1 and per-class P/R/F1 from label files");
  m_f1->add_option("--pred", pred_path, "Predicted labels")->required();
  m_f1->add_option("--gold", gold_path, "Gold labels")->required();
  auto* m_success = metrics->add_subcommand("success-rate", "Share of fake items flagged fake");
  m_success->add_option("--pred", pred_path, "Predicted labels")->required();
  m_success->add_option("--gold", gold_path, "Gold labels (all fake)")->required();

  // featurize
  std::string report_path;
  std::optional<int> label;
  auto* featurize = app.add_subcommand("featurize", "Per-claim feature rows from a report");
  featurize->add_option("--report", report_path, "Report JSON")->required();
  featurize->add_option("--label", label, "Attach this label (0/1) to every row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify || *extract) {
      auto config = load_config(config_path);
      if (!replay.empty()) {
        config.provider.kind = "replay";
        config.provider.transcript = replay;
      }
      if (!corpus.empty()) {
        retrieval::BackendConfig b;
        b.name = "corpus";
        b.corpus = corpus;
        config.backends = {b};
      }
      if (!registry.empty()) config.registry_path = registry;
      if (!mode.empty()) config.mode = aggregation::article_mode_from_string(mode);
      if (extraction_only) config.extraction_only = true;
      const core::NewsArticle article = read_article(article_path);

      if (*extract) {
        llm::Gateway gateway(llm::make_provider(config.provider), config.provider.gateway);
        extraction::ClaimExtractor extractor(gateway);
        json out{{"main_claim", extractor.extract_main_claim(article)},
                 {"key_claims", extractor.extract_key_claims(article)}};
        write_output("", out.dump(2));
        return 0;
      }
      const auto pipeline = service::build_pipeline(config);
      const core::VerificationReport report = pipeline->run(article);
      write_output(out_path, json(report).dump(2));
      std::cerr << "verdict " << core::to_string(report.article_verdict) << " p="
                << report.article_probability << " claims=" << report.claims.size()
                << " evidence=" << report.evidence.size() << " hash=" << report.content_hash
                << "\n";
      for (const auto& v : core::validate(report)) std::cerr << "warning: " << v << "\n";
      return 0;
    }

    if (*train) {
      const auto rows = aggregation::load_training_rows(data_path);
      const auto model = aggregation::train_gbdt(rows, params);
      model.save(model_out);
      std::cerr << "trained " << model.trees.size() << " trees on " << rows.size()
                << " rows; log-loss " << aggregation::training_log_loss(model, rows)
                << " (prior " << aggregation::prior_log_loss(rows) << "); digest "
                << model.digest() << "\n";
      return 0;
    }

    if (*evaluate) {
      const auto rows = aggregation::load_training_rows(data_path);
      const auto report = eval::run_cv(rows, folds, params, seed);
      write_output("", as_json ? report.to_json().dump(2) : report.to_text());
      return 0;
    }

    if (*serve) {
      const auto config = service::ServiceConfig::load(config_path);
      auto store = std::make_shared<service::JobStore>(config.data_dir);
      service::ServiceOptions opts;
      opts.workers = config.workers;
      service::VerificationService svc(service::build_pipeline(config), store, opts);
      service::HttpApi api(svc, config.static_dir);
      g_api = &api;
      std::signal(SIGINT, [](int) {
        if (g_api) g_api->stop();
      });
      std::signal(SIGTERM, [](int) {
        if (g_api) g_api->stop();
      });
      std::cerr << "listening on " << config.host << ":" << config.port << ", data in "
                << config.data_dir << "\n";
      api.listen(config.host, config.port);
      g_api = nullptr;
      return 0;
    }

    if (*m_rouge) {
      const auto p = eval::rouge(candidate, reference, eval::rouge_variant_from_string(variant));
      write_output("", json{{"variant", variant},
                            {"precision", p.precision},
                            {"recall", p.recall},
                            {"f1", p.f1}}
                           .dump(2));
      return 0;
    }
    if (*m_f1) {
      const auto preds = read_labels(pred_path);
      const auto golds = read_labels(gold_path);
      write_output("", eval::to_json(eval::metrics_table(preds, golds)).dump(2));
      return 0;
    }
    if (*m_success) {
      write_output("", json{{"success_rate",
                             eval::success_rate(read_labels(pred_path), read_labels(gold_path))}}
                           .dump(2));
      return 0;
    }

    if (*featurize) {
      const auto report = json::parse(slurp(report_path)).get<core::VerificationReport>();
      for (const auto& claim : report.claims) {
        std::vector<core::EvidenceItem> mine;
        for (const auto& e : report.evidence) {
          if (e.claim_id == claim.id) mine.push_back(e);
        }
        json row{{"claim_id", claim.id}, {"features", aggregation::featurize(mine)}};
        if (label) row["label"] = *label;
        std::cout << row.dump() << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
