// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure.
#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "claimcheck/aggregation/aggregate.hpp"
#include "claimcheck/core/json.hpp"
#include "claimcheck/core/report.hpp"
#include "claimcheck/core/text.hpp"
#include "claimcheck/eval/cv.hpp"
#include "claimcheck/eval/rouge.hpp"
#include "claimcheck/extraction/extractor.hpp"
#include "claimcheck/llm/provider.hpp"
#include "claimcheck/retrieval/search.hpp"
#include "claimcheck/service/http_api.hpp"
#include "rouge_golden.hpp"
#include "service_fixture.hpp"
#include "synthetic_data.hpp"

namespace {

using namespace claimcheck;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failures.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) messages_ << (failures_ > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + " failed check(s): " + messages_.str()};
  }

 private:
  int failures_ = 0;
  std::ostringstream messages_;
};

std::string fixture(const std::string& rel) { return std::string(CLAIMCHECK_FIXTURES) + "/" + rel; }

json load_json(const std::string& path) { return json::parse(testing::read_file(path)); }

core::NewsArticle load_article(const std::string& rel) {
  const json j = load_json(fixture(rel));
  return {j.value("id", ""), j.value("title", ""), j.value("body", ""), std::nullopt, std::nullopt};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const core::Clock kPinnedClock = [] { return core::Timestamp::from_unix_millis(1'700'000'000'000); };

std::shared_ptr<service::Pipeline> choline_pipeline(std::size_t min_relevant = 0) {
  auto config = service::ServiceConfig::load(fixture("choline_clots/config.json"));
  if (min_relevant) config.min_relevant = min_relevant;
  auto gateway = std::make_shared<llm::Gateway>(llm::make_provider(config.provider),
                                                config.provider.gateway);
  std::vector<std::shared_ptr<retrieval::SearchBackend>> backends;
  for (const auto& b : config.backends) backends.push_back(retrieval::make_backend(b));
  auto opts = service::pipeline_options(config);
  opts.pool.clock = kPinnedClock;
  return std::make_shared<service::Pipeline>(gateway, backends, config.policy,
                                             service::load_registry(config),
                                             service::make_scorer(config), opts);
}

// ---------------------------------------------------------------------------

Outcome replay_determinism() {
  Checker c;
  const auto article = load_article("choline_clots/article.json");
  const auto t0 = Clock::now();
  const auto first = choline_pipeline()->run(article);
  const auto second = choline_pipeline()->run(article);
  const double elapsed = seconds_since(t0);
  const std::string a = json(first).dump(), b = json(second).dump();
  c.expect(a == b, "serialized reports differ");
  c.expect(first.content_hash == second.content_hash, "content_hash differs");
  c.expect(core::compute_content_hash(first) == first.content_hash, "hash not recomputable");
  c.expect(core::validate(first).empty(), "report fails validation");
  c.expect(elapsed < 10.0, "two runs took " + std::to_string(elapsed) + " s");

  // Service path: two independent stores, same transcript and corpus.
  std::vector<std::string> hashes;
  for (int run = 0; run < 2; ++run) {
    auto f = testing::make_fixture_service("choline_clots", testing::scratch_dir("acc-replay"));
    const std::string id = f.service->submit(article);
    c.expect(f.service->wait(id, std::chrono::seconds(10)), "service job did not finish");
    const auto job = f.service->get_job(id);
    c.expect(job.state == service::JobState::done, "service job " + std::string(to_string(job.state)));
    if (job.report) hashes.push_back(job.report->content_hash);
  }
  c.expect(hashes.size() == 2 && hashes[0] == hashes[1] && hashes[0] == first.content_hash,
           "service runs disagree on content_hash");
  char buf[160];
  std::snprintf(buf, sizeof buf, "hash %.12s... identical over 2 pipeline + 2 service runs, %.2f s",
                first.content_hash.c_str(), elapsed);
  return c.outcome(buf);
}

Outcome choline_shape() {
  Checker c;
  const json expected = load_json(fixture("choline_clots/expected.json"));
  const auto article = load_article("choline_clots/article.json");
  const auto config = service::ServiceConfig::load(fixture("choline_clots/config.json"));

  llm::Gateway gateway(llm::make_provider(config.provider), config.provider.gateway);
  extraction::ClaimExtractor extractor(gateway);
  const auto main_claim = extractor.extract_main_claim(article);
  const auto key_claims = extractor.extract_key_claims(article);
  c.expect(main_claim.text == expected["main_claim"].get<std::string>(), "main claim differs");
  std::vector<std::string> texts;
  for (const auto& k : key_claims) texts.push_back(k.text);
  c.expect(texts == expected["key_claims"].get<std::vector<std::string>>(), "key claim list differs");

  const auto report = choline_pipeline()->run(article);
  std::vector<std::string> queries;
  for (const auto& q : report.queries) queries.push_back(q.text);
  c.expect(queries == expected["queries"].get<std::vector<std::string>>(), "queries differ");
  c.expect(report.evidence.size() == expected["pool_size"].get<std::size_t>(),
           "pool size " + std::to_string(report.evidence.size()));
  std::map<std::string, int> hist{{"support", 0}, {"negate", 0}, {"baseless", 0}};
  for (const auto& e : report.evidence) hist[std::string(core::to_string(e.label))]++;
  for (const auto& [label, n] : expected["histogram"].items()) {
    c.expect(hist[label] == n.get<int>(), label + " count " + std::to_string(hist[label]));
  }
  retrieval::FilterPolicy policy;
  for (const auto& e : report.evidence) c.expect(!policy.blocks(e.result), "blocked " + e.result.url);
  c.expect(report.claim_verdicts.size() == 1 &&
               std::string(core::to_string(report.claim_verdicts[0].decision)) ==
                   expected["decision"].get<std::string>(),
           "decision is not " + expected["decision"].get<std::string>());

  // Rule score recomputed from tiers: (S+1)/(S+N+2).
  const double w[] = {0.25, 0.5, 1.0, 1.5, 2.0};
  double s = 0, n = 0;
  for (const auto& e : report.evidence) {
    if (e.label == core::VerdictLabel::support) s += w[*e.source_tier - 1];
    if (e.label == core::VerdictLabel::negate) n += w[*e.source_tier - 1];
  }
  const double oracle = (s + 1) / (s + n + 2);
  c.expect(!report.claim_verdicts.empty() &&
               std::abs(report.claim_verdicts[0].truth_probability - oracle) < 1e-12,
           "probability does not match the rule oracle");

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu key claims, %zu queries, %zu results: %d support / %d negate / %d baseless, "
                "p=%.4f, decision %s",
                key_claims.size(), queries.size(), report.evidence.size(), hist["support"],
                hist["negate"], hist["baseless"], oracle,
                report.claim_verdicts.empty() ? "?"
                                              : std::string(core::to_string(
                                                                report.claim_verdicts[0].decision))
                                                    .c_str());
  return c.outcome(buf);
}

Outcome metric_oracle() {
  Checker c;
  std::mt19937_64 rng(20240601);
  int vectors = 0;
  for (; vectors < 1000; ++vectors) {
    const std::size_t len = 1 + rng() % 200;
    const int n_classes = 2 + static_cast<int>(rng() % 3);
    std::vector<int> p(len), g(len);
    for (std::size_t i = 0; i < len; ++i) {
      p[i] = static_cast<int>(rng() % n_classes);
      g[i] = static_cast<int>(rng() % n_classes);
    }
    double agree = 0;
    for (std::size_t i = 0; i < len; ++i) agree += p[i] == g[i];
    for (int cls = 0; cls < n_classes; ++cls) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < len; ++i) {
        tp += p[i] == cls && g[i] == cls;
        fp += p[i] == cls && g[i] != cls;
        fn += p[i] != cls && g[i] == cls;
      }
      const double P = tp + fp > 0 ? tp / (tp + fp) : 0;
      const double R = tp + fn > 0 ? tp / (tp + fn) : 0;
      const double F = P + R > 0 ? 2 * P * R / (P + R) : 0;
      const auto got = eval::prf1(eval::confusion(p, g, cls));
      c.expect(std::abs(got.precision - P) <= 1e-12 && std::abs(got.recall - R) <= 1e-12 &&
                   std::abs(got.f1 - F) <= 1e-12,
               "prf1 mismatch on vector " + std::to_string(vectors));
    }
    const double micro = eval::micro_f1(p, g);
    c.expect(std::abs(micro - agree / len) <= 1e-12, "micro_f1 != recount");
    c.expect(micro == eval::accuracy(p, g), "micro_f1 != accuracy exactly");
  }
  return c.outcome(std::to_string(vectors) + " random vectors, prf1/micro-F1 within 1e-12, micro-F1 == accuracy");
}

Outcome rouge_golden() {
  Checker c;
  const auto goldens = testing::load_rouge_goldens(fixture("rouge_golden.tsv"));
  c.expect(goldens.size() >= 10, "only " + std::to_string(goldens.size()) + " golden pairs");
  auto round6 = [](double x) { return std::round(x * 1e6) / 1e6; };
  bool has_r1_example = false, has_rl_example = false;
  for (const auto& g : goldens) {
    has_r1_example |= g.variant == "r1" && g.candidate == "the cat" && g.reference == "the cat sat on the mat";
    has_rl_example |= g.variant == "rl" && g.candidate == "the cat sat" && g.reference == "the cat on mat";
    const auto got = eval::rouge(g.candidate, g.reference, eval::rouge_variant_from_string(g.variant));
    c.expect(round6(got.precision) == round6(g.precision) && round6(got.recall) == round6(g.recall) &&
                 round6(got.f1) == round6(g.f1),
             g.variant + " '" + g.candidate + "'");
  }
  c.expect(has_r1_example && has_rl_example, "documented examples missing from the golden set");

  std::mt19937 rng(99);
  const std::string alphabet = "abcdefgh XYZ 0123 .,;-'";
  int identity = 0;
  while (identity < 100) {
    std::string x;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 60); i < n; ++i) x += alphabet[rng() % alphabet.size()];
    if (core::alnum_tokens(x).empty()) continue;
    ++identity;
    for (auto v : {eval::RougeVariant::r1, eval::RougeVariant::r2, eval::RougeVariant::rl}) {
      if (v == eval::RougeVariant::r2 && core::alnum_tokens(x).size() < 2) continue;
      const auto s = eval::rouge(x, x, v);
      c.expect(s.precision == 1.0 && s.recall == 1.0 && s.f1 == 1.0, "rouge(x,x) != 1 for '" + x + "'");
    }
  }
  return c.outcome(std::to_string(goldens.size()) + " golden pairs match to 6 dp; rouge(x,x)=1 on " +
                   std::to_string(identity) + " random strings");
}

std::vector<aggregation::TrainingRow> dense(const std::vector<std::pair<aggregation::FeatureVector, int>>& rows) {
  std::vector<aggregation::TrainingRow> out;
  for (const auto& [fv, y] : rows) out.emplace_back(fv.dense(), y);
  return out;
}

Outcome gbdt() {
  Checker c;
  aggregation::GbdtParams params;
  params.max_depth = 3;
  params.n_rounds = 50;
  params.learning_rate = 0.1;
  const auto rows = dense(testing::tier5_rule_rows(200, 2024));

  const auto t0 = Clock::now();
  const auto model = aggregation::train_gbdt(rows, params);
  const double train_s = seconds_since(t0);
  const auto again = aggregation::train_gbdt(rows, params);
  int correct = 0;
  for (const auto& [x, y] : rows) correct += (model.predict(x) >= 0.5 ? 1 : 0) == y;
  const double acc = static_cast<double>(correct) / rows.size();
  c.expect(acc == 1.0, "training accuracy " + std::to_string(acc));
  c.expect(model.digest() == again.digest(), "digest differs between runs");
  c.expect(train_s < 5.0, "training took " + std::to_string(train_s) + " s");

  const auto cv = eval::run_cv(rows, 5, params);
  c.expect(cv.pooled.f1 >= 0.95, "pooled micro-F1 " + std::to_string(cv.pooled.f1));

  // Log-loss below the prior on a spread of non-degenerate fixtures.
  std::vector<std::vector<aggregation::TrainingRow>> fixtures;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) fixtures.push_back(dense(testing::tier5_rule_rows(60 + 40 * seed, seed)));
  std::mt19937_64 rng(8);
  for (int f = 0; f < 10; ++f) {
    std::vector<aggregation::TrainingRow> noisy;
    const std::size_t n = 10 + rng() % 150;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x(aggregation::kFeatureDims);
      for (auto& v : x) v = static_cast<double>(rng() % 4);
      noisy.emplace_back(x, static_cast<int>(rng() % 2));
    }
    noisy[0].second = 0;
    noisy[1].second = 1;
    fixtures.push_back(noisy);
  }
  int below = 0;
  for (const auto& fx : fixtures) {
    for (const auto& p : {params, aggregation::GbdtParams{}}) {
      const auto m = aggregation::train_gbdt(fx, p);
      const bool ok = aggregation::training_log_loss(m, fx) < aggregation::prior_log_loss(fx);
      below += ok;
      c.expect(ok, "log-loss not below prior on a fixture of " + std::to_string(fx.size()) + " rows");
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "train acc %.3f, 5-fold pooled micro-F1 %.4f, digest stable, %.3f s, loss < prior on %d/%zu fits",
                acc, cv.pooled.f1, train_s, below, 2 * fixtures.size());
  return c.outcome(buf);
}

Outcome rule_monotonicity() {
  Checker c;
  std::mt19937_64 rng(77);
  long checks = 0;
  for (int i = 0; i < 10000; ++i) {
    aggregation::FeatureVector fv;
    for (int tier = 1; tier <= 5; ++tier) {
      for (auto l : core::kAllLabels) fv.add(tier, l, static_cast<int>(rng() % (1 + rng() % 12)));
    }
    const double base = aggregation::rule_aggregate(fv).score;
    for (int tier = 1; tier <= 5; ++tier) {
      auto up = fv;
      up.add(tier, core::VerdictLabel::support, 1);
      auto down = fv;
      down.add(tier, core::VerdictLabel::negate, 1);
      c.expect(aggregation::rule_aggregate(up).score >= base, "support lowered the score");
      c.expect(aggregation::rule_aggregate(down).score <= base, "negate raised the score");
      checks += 2;
    }
  }
  return c.outcome("10000 random vectors, " + std::to_string(checks) + " single-item additions, 0 counterexamples");
}

class CountingBackend final : public retrieval::SearchBackend {
 public:
  explicit CountingBackend(std::shared_ptr<retrieval::SearchBackend> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return inner_->name(); }
  retrieval::BackendKind kind() const override { return inner_->kind(); }
  std::vector<core::SearchResult> search(const std::string& q, std::size_t limit) override {
    ++calls;
    return inner_->search(q, limit);
  }
  int calls = 0;

 private:
  std::shared_ptr<retrieval::SearchBackend> inner_;
};

Outcome retrieval_policy() {
  Checker c;
  const retrieval::FilterPolicy policy;
  auto corpus = std::make_shared<retrieval::FixtureCorpusBackend>(
      retrieval::FixtureCorpusBackend::load("fixture", fixture("choline_clots/corpus.jsonl")));

  // Sweep: queries built from corpus vocabulary, weighted towards the words
  // the blocked documents share.
  std::vector<std::string> vocab;
  {
    std::set<std::string> seen;
    for (const auto& d : corpus->documents()) {
      for (const auto& t : core::alnum_tokens(d.title + " " + d.body)) {
        if (seen.insert(t).second) vocab.push_back(t);
      }
    }
  }
  const std::vector<std::string> hot{"cleveland", "clinic", "choline", "blood", "clotting", "study", "eating"};
  std::mt19937_64 rng(50);
  int raw_blocked_hits = 0;
  std::size_t pooled = 0;
  for (int i = 0; i < 50; ++i) {
    std::string q;
    for (int t = 0, n = 2 + static_cast<int>(rng() % 5); t < n; ++t) {
      q += (t ? " " : "") + (rng() % 2 ? hot[rng() % hot.size()] : vocab[rng() % vocab.size()]);
    }
    for (const auto& r : corpus->search(q, retrieval::kMaxResultsPerQueryLimit)) raw_blocked_hits += policy.blocks(r);
    core::Claim claim{"sweep:" + std::to_string(i), "sweep", q, core::Granularity::key, i};
    std::vector<core::SearchQuery> queries{{claim.id, q, 0}, {claim.id, q + " news", 1}};
    const auto pool = retrieval::gather_evidence_pool(claim, queries, {corpus}, policy);
    for (const auto& r : pool.results) c.expect(!policy.blocks(r), "blocked result " + r.url + " in pool");
    pooled += pool.results.size();
  }
  c.expect(raw_blocked_hits > 0, "sweep never reached a blocked document");

  // Query cap: the model offers 1..6 queries, duplicates included.
  std::mt19937_64 qrng(51);
  int max_seen = 0;
  for (int i = 0; i < 200; ++i) {
    const int offered = 1 + static_cast<int>(qrng() % 6);
    json answer{{"query", json::array()}};
    for (int k = 0; k < offered; ++k) answer["query"].push_back("query " + std::to_string(qrng() % 4));
    llm::GatewayOptions gopts;
    gopts.retry_backoff = std::chrono::milliseconds(0);
    llm::Gateway gw(std::make_shared<llm::FunctionProvider>([&](const llm::ChatRequest&) { return answer.dump(); }),
                    gopts);
    core::Claim claim{"cap:" + std::to_string(i), "cap", "The council approved the budget in May.",
                      core::Granularity::main, 0};
    const auto qs = retrieval::generate_queries(claim, gw);
    max_seen = std::max<int>(max_seen, static_cast<int>(qs.size()));
    c.expect(qs.size() >= 1 && qs.size() <= 3, "query count " + std::to_string(qs.size()));
    for (std::size_t r = 0; r < qs.size(); ++r) c.expect(qs[r].rank == static_cast<int>(r), "rank gap");
  }

  // Early stop: the first generated query already yields 10 of the 8
  // required results, so the second is never sent.
  const json expected = load_json(fixture("choline_clots/expected.json"));
  const auto qtexts = expected["queries"].get<std::vector<std::string>>();
  core::Claim main{"eggs-clots:main", "eggs-clots", expected["main_claim"].get<std::string>(),
                   core::Granularity::main, 0};
  std::vector<core::SearchQuery> queries;
  for (std::size_t r = 0; r < qtexts.size(); ++r) queries.push_back({main.id, qtexts[r], static_cast<int>(r)});
  auto counted = std::make_shared<CountingBackend>(corpus);
  const auto stopped = retrieval::gather_evidence_pool(main, queries, {counted}, policy);
  c.expect(stopped.executed_ranks == std::vector<int>{0}, "early stop did not skip query 2");
  c.expect(counted->calls == 1, "backend called " + std::to_string(counted->calls) + " times");
  retrieval::PoolOptions wide;
  wide.min_relevant = 20;
  auto counted_wide = std::make_shared<CountingBackend>(corpus);
  const auto full = retrieval::gather_evidence_pool(main, queries, {counted_wide}, policy, wide);
  c.expect(full.executed_ranks == (std::vector<int>{0, 1}) && counted_wide->calls == 2,
           "threshold above the pool did not run every query");

  return c.outcome("50-query sweep: " + std::to_string(pooled) + " pooled, 0 blocked (" +
                   std::to_string(raw_blocked_hits) + " blocked raw hits filtered); max " +
                   std::to_string(max_seen) + " queries/claim over 200 claims; early stop after " +
                   std::to_string(stopped.results.size()) + " results skipped " +
                   std::to_string(queries.size() - stopped.executed_ranks.size()) + " query");
}

Outcome kfold() {
  Checker c;
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 300;
    std::vector<int> labels(n);
    const unsigned rate = 2 + rng() % 5;
    for (auto& l : labels) l = rng() % rate == 0 ? 1 : 0;
    const std::size_t k = 2 + rng() % std::min<std::size_t>(n - 1, 10);
    const std::uint64_t seed = rng();
    const auto folds = eval::kfold_split(labels, k, seed);
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    c.expect(folds.size() == k, tag + "fold count");
    std::vector<int> hits(n, 0);
    std::size_t lo = n, hi = 0;
    double positives = 0;
    for (int l : labels) positives += l;
    for (const auto& f : folds) {
      lo = std::min(lo, f.size());
      hi = std::max(hi, f.size());
      double fold_pos = 0;
      for (auto i : f) {
        if (i < n) ++hits[i];
        fold_pos += labels.at(i);
      }
      c.expect(std::abs(fold_pos - positives * f.size() / n) <= 1.0, tag + "stratification off by more than 1");
    }
    c.expect(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }), tag + "not a partition");
    c.expect(hi - lo <= 1, tag + "sizes differ by more than 1");
    c.expect(eval::kfold_split(labels, k, seed) == folds, tag + "not deterministic");
  }
  return c.outcome("100 random datasets: disjoint, covering, sizes within 1, positives within 1 of proportional, seed-stable");
}

class RandomStageStub final : public service::JobRunner {
 public:
  core::VerificationReport run(const core::NewsArticle& article, const service::StageFn& advance) override {
    std::mt19937_64 rng(std::hash<std::string>{}(article.body));
    for (int i = 0, n = static_cast<int>(rng() % 7); i < n; ++i) {
      if (rng() % 12 == 0) throw std::runtime_error("stage failure");
      advance(static_cast<service::JobState>(rng() % 7));
    }
    core::VerificationReport r;
    r.article = article;
    r.extraction_only = true;
    return core::seal(r);
  }
  core::VerificationReport rerun_claim(const core::VerificationReport& r, const std::string&) override { return r; }
  core::VerificationReport rescore(core::VerificationReport r) const override { return r; }
  json registry_json() const override { return json::object(); }
};

Outcome service_contract() {
  Checker c;
  using service::JobState;

  // submit -> poll -> report over HTTP on the replay fixture.
  auto f = testing::make_fixture_service("choline_clots", testing::scratch_dir("acc-http"));
  service::HttpApi api(*f.service);
  httplib::Client cli("127.0.0.1", api.start("127.0.0.1", 0));
  const auto submitted = cli.Post("/v1/verify", testing::read_file(fixture("choline_clots/article.json")),
                                  "application/json");
  c.expect(submitted && submitted->status == 202, "submit did not return 202");
  std::string state;
  std::string id;
  if (submitted && submitted->status == 202) {
    id = json::parse(submitted->body)["job_id"];
    c.expect(service::is_ulid(id), "job id is not a 26-char ULID");
    const auto deadline = Clock::now() + std::chrono::seconds(10);
    while (Clock::now() < deadline) {
      const auto res = cli.Get("/v1/jobs/" + id);
      state = res ? json::parse(res->body)["state"].get<std::string>() : "unreachable";
      if (state == "done" || state == "failed") break;
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    c.expect(state == "done", "job ended as " + state);
    const auto rep = cli.Get("/v1/reports/" + id);
    c.expect(rep && rep->status == 200, "report endpoint failed");
    if (rep && rep->status == 200) {
      const auto report = json::parse(rep->body).get<core::VerificationReport>();
      c.expect(core::compute_content_hash(report) == report.content_hash, "served report hash stale");
      c.expect(report.evidence.size() == 18, "served report has wrong pool");
    }
  }
  api.stop();

  // Forward-only state machine under a randomized stub.
  auto store = std::make_shared<service::JobStore>(testing::scratch_dir("acc-stub"));
  int illegal = 0, jobs = 0;
  {
    service::VerificationService svc(std::make_shared<RandomStageStub>(), store);
    std::vector<std::string> ids;
    for (int i = 0; i < 300; ++i) {
      ids.push_back(svc.submit(core::NewsArticle{"", "", "stub article " + std::to_string(i), {}, {}}));
    }
    for (const auto& jid : ids) c.expect(svc.wait(jid, std::chrono::seconds(20)), "stub job hung");
    jobs = static_cast<int>(ids.size());
  }
  std::map<std::string, std::vector<JobState>> seqs;
  for (const auto& rec : store->read_ledger()) {
    if (rec["type"] == "submitted") seqs[rec["job_id"]].push_back(JobState::queued);
    if (rec["type"] == "state") seqs[rec["job_id"]].push_back(service::job_state_from_string(rec["state"].get<std::string>()));
  }
  for (const auto& [jid, seq] : seqs) {
    for (std::size_t i = 1; i < seq.size(); ++i) illegal += !service::transition_allowed(seq[i - 1], seq[i]);
    c.expect(service::is_terminal(seq.back()), "job " + jid + " not terminal");
  }
  c.expect(illegal == 0, std::to_string(illegal) + " illegal transitions");

  // Override flips the single-support fixture.
  auto ss = testing::make_fixture_service("single_support", testing::scratch_dir("acc-override"));
  const std::string sid = ss.service->submit(std::string_view(testing::read_file(fixture("single_support/article.json"))));
  c.expect(ss.service->wait(sid, std::chrono::seconds(10)), "single-support job hung");
  const auto before = ss.service->get_report(sid);
  const auto bytes = ss.store->ledger_bytes();
  const auto flipped = ss.service->apply_override(
      {sid, before.claims.at(0).id, "ss-ap", core::VerdictLabel::negate, "acceptance", {}});
  c.expect(before.claim_verdicts.at(0).decision == core::ClaimDecision::supported &&
               before.article_verdict == core::ArticleVerdict::real,
           "fixture does not start supported/real");
  c.expect(flipped.claim_verdict.decision == core::ClaimDecision::refuted &&
               flipped.article_verdict == core::ArticleVerdict::fake,
           "override did not flip to refuted/fake");
  c.expect(ss.store->ledger_bytes() > bytes, "override not appended to the ledger");
  c.expect(*ss.service->get_job(sid).report == before, "original evidence was modified");

  return c.outcome("HTTP round trip " + state + "; " + std::to_string(jobs) +
                   " stub jobs, 0 illegal transitions; override supported/real -> " +
                   std::string(core::to_string(flipped.claim_verdict.decision)) + "/" +
                   std::string(core::to_string(flipped.article_verdict)));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"replay-determinism", replay_determinism},
      {"choline-clots-shape", choline_shape},
      {"metric-oracle", metric_oracle},
      {"rouge-golden", rouge_golden},
      {"gbdt", gbdt},
      {"rule-monotonicity", rule_monotonicity},
      {"retrieval-policy", retrieval_policy},
      {"kfold", kfold},
      {"service-contract", service_contract},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %-20s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
