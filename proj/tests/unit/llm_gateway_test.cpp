#include <httplib.h>

#include <atomic>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "claimcheck/core/parallel.hpp"
#include "claimcheck/llm/gateway.hpp"
#include "claimcheck/llm/http_provider.hpp"
#include "claimcheck/llm/schema.hpp"
#include "test_support.hpp"

namespace claimcheck {
namespace {

using namespace llm;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GatewayOptions fast_options(int max_retries = 3) {
  GatewayOptions o;
  o.max_retries = max_retries;
  o.retry_backoff = std::chrono::milliseconds(0);
  return o;
}

TEST(PromptTest, MainClaimRendersTemplateText) {
  const std::string out = render(prompt_template(TemplateName::main_claim), {{"content", "X"}});
  EXPECT_EQ(out,
            "Given the input content below, please summarize the single key claim.\n"
            "Input content: X\n"
            "Please output with the follow json format {\"key_claim\": XXX}.\n"
            "Please output now:");
}

TEST(PromptTest, KeyClaimsCollapsesDoubledBraces) {
  const std::string out = render(prompt_template(TemplateName::key_claims), {{"content", "X"}});
  EXPECT_NE(out.find("{\"key_claims\": [{\"claim\": XXX}, ...]}."), std::string::npos) << out;
}

TEST(PromptTest, MissingPlaceholderIsNamed) {
  try {
    render(prompt_template(TemplateName::query_gen), {{"content", "unused"}});
    FAIL() << "expected missing placeholder";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::missing_placeholder);
    EXPECT_STREQ(e.what(), "claim");
  }
}

TEST(PromptTest, VerifyMatchesGoldenFile) {
  const std::string out =
      render(prompt_template(TemplateName::verify),
             {{"search_result", "Title: Budget passes\nThe council approved the budget on May 2."},
              {"claim", "The city council approved the budget on May 2."}});
  EXPECT_EQ(out, read_file(testing::fixture_path("verify_prompt_golden.txt")));
}

TEST(PromptTest, PlaceholderSetsMatchPromptVariables) {
  using V = std::vector<std::string>;
  EXPECT_EQ(prompt_template(TemplateName::main_claim).placeholders(), V{"content"});
  EXPECT_EQ(prompt_template(TemplateName::key_claims).placeholders(), V{"content"});
  EXPECT_EQ(prompt_template(TemplateName::query_gen).placeholders(), V{"claim"});
  EXPECT_EQ(prompt_template(TemplateName::verify).placeholders(), (V{"search_result", "claim"}));
  EXPECT_EQ(prompt_template(TemplateName::relevance).placeholders(), (V{"search_result", "claim"}));
}

TEST(PromptTest, BindingsAreSubstitutedVerbatim) {
  const std::string out =
      render(prompt_template(TemplateName::query_gen), {{"claim", "a {claim} }} {{ b"}});
  EXPECT_NE(out.find("Claim: a {claim} }} {{ b\n"), std::string::npos);
}

TEST(PromptTest, RenderIsInjectiveOnBraceFreeBindings) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> len(0, 6), ch('a', 'e');
  std::set<std::pair<std::string, std::string>> seen_inputs;
  std::set<std::string> seen_outputs;
  for (int i = 0; i < 500; ++i) {
    std::string a, b;
    for (int n = len(rng); n > 0; --n) a.push_back(static_cast<char>(ch(rng)));
    for (int n = len(rng); n > 0; --n) b.push_back(static_cast<char>(ch(rng)));
    if (!seen_inputs.insert({a, b}).second) continue;
    seen_outputs.insert(
        render(prompt_template(TemplateName::verify), {{"search_result", a}, {"claim", b}}));
  }
  EXPECT_EQ(seen_outputs.size(), seen_inputs.size());
}

TEST(SchemaTest, VerifyExample) {
  const auto r = parse_schema(
      TemplateName::verify,
      R"({"support_or_negate_or_baseless":"support","confidence":"high","rationale":"R"})");
  ASSERT_TRUE(r.parse_ok()) << r.parse_error;
  EXPECT_EQ(r.as<VerifyOutput>(),
            (VerifyOutput{core::VerdictLabel::support, core::Confidence::high, "R"}));
}

TEST(SchemaTest, VerifyRejectsUnknownLabelAndConfidence) {
  EXPECT_FALSE(parse_schema(TemplateName::verify,
                            R"({"support_or_negate_or_baseless":"maybe","confidence":"high","rationale":"R"})")
                   .parse_ok());
  EXPECT_FALSE(parse_schema(TemplateName::verify,
                            R"({"support_or_negate_or_baseless":"negate","confidence":"certain","rationale":"R"})")
                   .parse_ok());
  EXPECT_FALSE(parse_schema(TemplateName::verify,
                            R"({"support_or_negate_or_baseless":"negate","confidence":"low","rationale":" "})")
                   .parse_ok());
  const auto baseless = parse_schema(
      TemplateName::verify,
      R"({"support_or_negate_or_baseless":"Baseless","confidence":"LOW","rationale":""})");
  ASSERT_TRUE(baseless.parse_ok()) << baseless.parse_error;
  EXPECT_EQ(baseless.as<VerifyOutput>().label, core::VerdictLabel::baseless);
}

TEST(SchemaTest, KeyClaimsInsideMarkdownFence) {
  const auto r = parse_schema(TemplateName::key_claims,
                              "Sure! Here are the claims:\n```json\n"
                              R"({"key_claims":[{"claim":"A"},{"claim":"B"}]})"
                              "\n```\nLet me know if you need more.");
  ASSERT_TRUE(r.parse_ok()) << r.parse_error;
  EXPECT_EQ(r.as<KeyClaimsOutput>().claims, (std::vector<std::string>{"A", "B"}));
}

TEST(SchemaTest, SkipsBracesThatAreNotJson) {
  const auto r = parse_schema(TemplateName::main_claim,
                              R"(Output {not json} then {"key_claim": "The {bridge} fell."})");
  ASSERT_TRUE(r.parse_ok()) << r.parse_error;
  EXPECT_EQ(r.as<MainClaimOutput>().key_claim, "The {bridge} fell.");
}

TEST(SchemaTest, QueryAcceptsStringOrList) {
  auto one = parse_schema(TemplateName::query_gen, R"({"query": "choline clotting"})");
  ASSERT_TRUE(one.parse_ok());
  EXPECT_EQ(one.as<QueryOutput>().queries, std::vector<std::string>{"choline clotting"});
  auto many = parse_schema(TemplateName::query_gen, R"({"query": ["a", "b"]})");
  ASSERT_TRUE(many.parse_ok());
  EXPECT_EQ(many.as<QueryOutput>().queries.size(), 2u);
  EXPECT_FALSE(parse_schema(TemplateName::query_gen, R"({"query": 3})").parse_ok());
  EXPECT_FALSE(parse_schema(TemplateName::query_gen, "no json here").parse_ok());
}

TEST(SchemaTest, RelevanceYesNo) {
  auto yy = parse_schema(TemplateName::relevance,
                         R"({"about_the_same_news_story": "yes", "contains_related_content": "yes"})");
  ASSERT_TRUE(yy.parse_ok());
  EXPECT_EQ(yy.as<RelevanceOutput>(), (RelevanceOutput{true, true}));
  auto nn = parse_schema(TemplateName::relevance,
                         R"({"about_the_same_news_story": "no", "contains_related_content": "No"})");
  ASSERT_TRUE(nn.parse_ok());
  EXPECT_EQ(nn.as<RelevanceOutput>(), (RelevanceOutput{false, false}));
  EXPECT_FALSE(parse_schema(TemplateName::relevance,
                            R"({"about_the_same_news_story": "perhaps", "contains_related_content": "no"})")
                   .parse_ok());
}

// Property: no token outside the closed sets ever parses.
TEST(SchemaTest, ClosedEnumsUnderRandomTokens) {
  const std::set<std::string> labels{"support", "negate", "baseless"};
  const std::set<std::string> confidences{"high", "medium", "low"};
  std::vector<std::string> pool{"support", "negate", "baseless", "high", "medium", "low",
                                "supports", "neg", "", "unknown", "true", "5"};
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    const std::string label = pool[pick(rng)];
    const std::string conf = pool[pick(rng)];
    const std::string raw = R"({"support_or_negate_or_baseless":")" + label +
                            R"(","confidence":")" + conf + R"(","rationale":"r"})";
    const auto r = parse_schema(TemplateName::verify, raw);
    EXPECT_EQ(r.parse_ok(), labels.count(label) && confidences.count(conf)) << raw;
  }
}

TEST(TranscriptTest, LoadRejectsConflictingDuplicates) {
  const std::string ok = R"({"request_digest":"d1","response_text":"a"})"
                         "\n"
                         R"({"request_digest":"d1","response_text":"a"})"
                         "\n";
  EXPECT_EQ(Transcript::parse(ok).size(), 1u);
  const std::string bad = R"({"request_digest":"d1","response_text":"a"})"
                          "\n"
                          R"({"request_digest":"d1","response_text":"b"})";
  EXPECT_THROW_CODE(Transcript::parse(bad), Errc::parse_failure);
  EXPECT_THROW_CODE(Transcript::parse("not json"), Errc::parse_failure);
}

TEST(ReplayTest, KnownDigestReturnsRecordedResponse) {
  const std::string prompt = render(prompt_template(TemplateName::query_gen), {{"claim", "C"}});
  Transcript t;
  t.add(request_digest(TemplateName::query_gen, prompt), R"({"query": "recorded"})");
  Gateway gw(std::make_shared<ReplayProvider>(t), fast_options());
  const auto r = gw.complete(TemplateName::query_gen, prompt);
  EXPECT_EQ(r.raw_text, R"({"query": "recorded"})");
  EXPECT_EQ(r.attempt_count, 1);
}

TEST(ReplayTest, UnknownDigestIsTranscriptMiss) {
  Gateway gw(std::make_shared<ReplayProvider>(Transcript{}), fast_options());
  EXPECT_THROW_CODE(gw.complete(TemplateName::query_gen, "anything"), Errc::transcript_miss);
}

TEST(ReplayTest, DigestDependsOnTemplateName) {
  EXPECT_NE(request_digest(TemplateName::verify, "p"), request_digest(TemplateName::relevance, "p"));
  EXPECT_EQ(request_digest(TemplateName::verify, "p"), request_digest(TemplateName::verify, "p"));
}

TEST(ReplayTest, TwoRunsAreByteIdentical) {
  Transcript t;
  std::vector<std::string> prompts;
  for (int i = 0; i < 20; ++i) {
    prompts.push_back("prompt " + std::to_string(i));
    t.add(request_digest(TemplateName::main_claim, prompts.back()),
          "{\"key_claim\": \"claim number " + std::to_string(i) + "\"}");
  }
  auto run = [&] {
    Gateway gw(std::make_shared<ReplayProvider>(t), fast_options());
    std::vector<LlmResponse> out;
    for (const auto& p : prompts) out.push_back(gw.ask(TemplateName::main_claim, p, 2));
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(RecordingTest, RecordedTranscriptReplays) {
  const std::string path = ::testing::TempDir() + "/recorded.jsonl";
  std::remove(path.c_str());
  auto inner = std::make_shared<FunctionProvider>(
      [](const ChatRequest& r) { return "echo:" + r.prompt; });
  {
    Gateway rec(std::make_shared<RecordingProvider>(inner, path), fast_options());
    rec.complete(TemplateName::verify, "p1");
    rec.complete(TemplateName::verify, "p2");
    rec.complete(TemplateName::verify, "p1");
  }
  const Transcript t = Transcript::load(path);
  EXPECT_EQ(t.size(), 2u);
  Gateway replay(std::make_shared<ReplayProvider>(t), fast_options());
  EXPECT_EQ(replay.complete(TemplateName::verify, "p2").raw_text, "echo:p2");
}

TEST(RetryTest, FaultInjectingStubSucceedsOnThirdAttempt) {
  std::atomic<int> calls{0};
  auto stub = std::make_shared<FunctionProvider>([&](const ChatRequest&) -> std::string {
    if (++calls <= 2) throw TransientError("injected");
    return "ok";
  });
  Gateway gw(stub, fast_options(3));
  const auto r = gw.complete(TemplateName::main_claim, "p");
  EXPECT_EQ(r.raw_text, "ok");
  EXPECT_EQ(r.attempt_count, 3);
  EXPECT_EQ(calls.load(), 3);
}

TEST(RetryTest, ExhaustedAfterMaxRetries) {
  std::atomic<int> calls{0};
  auto stub = std::make_shared<FunctionProvider>([&](const ChatRequest&) -> std::string {
    ++calls;
    throw TransientError("down");
  });
  Gateway gw(stub, fast_options(3));
  EXPECT_THROW_CODE(gw.complete(TemplateName::main_claim, "p"), Errc::transport_exhausted);
  EXPECT_EQ(calls.load(), 4);
}

TEST(RetryTest, NonTransientErrorsAreNotRetried) {
  std::atomic<int> calls{0};
  auto stub = std::make_shared<FunctionProvider>([&](const ChatRequest&) -> std::string {
    ++calls;
    throw Error(Errc::transcript_miss, "nope");
  });
  Gateway gw(stub, fast_options(3));
  EXPECT_THROW_CODE(gw.complete(TemplateName::main_claim, "p"), Errc::transcript_miss);
  EXPECT_EQ(calls.load(), 1);
}

TEST(AskTest, ReasksWithDistinctPromptsUntilParse) {
  std::vector<std::string> prompts;
  std::mutex m;
  auto stub = std::make_shared<FunctionProvider>([&](const ChatRequest& r) -> std::string {
    std::lock_guard lock(m);
    prompts.push_back(r.prompt);
    return prompts.size() < 3 ? "garbage" : R"({"key_claim": "Fine."})";
  });
  Gateway gw(stub, fast_options());
  const auto r = gw.ask(TemplateName::main_claim, "base", 2);
  ASSERT_TRUE(r.parse_ok());
  ASSERT_EQ(prompts.size(), 3u);
  EXPECT_EQ(std::set<std::string>(prompts.begin(), prompts.end()).size(), 3u);
  EXPECT_EQ(prompts[0], "base");
}

TEST(AskTest, ReturnsLastFailureAfterReasks) {
  auto stub = std::make_shared<FunctionProvider>([](const ChatRequest&) { return "garbage"; });
  Gateway gw(stub, fast_options());
  const auto r = gw.ask(TemplateName::main_claim, "base", 2);
  EXPECT_FALSE(r.parse_ok());
  EXPECT_EQ(r.raw_text, "garbage");
  EXPECT_FALSE(r.parse_error.empty());
}

TEST(ConcurrencyTest, MaxInFlightIsEnforced) {
  std::atomic<int> active{0}, peak{0};
  auto stub = std::make_shared<FunctionProvider>([&](const ChatRequest&) -> std::string {
    const int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    --active;
    return "x";
  });
  GatewayOptions o = fast_options();
  o.max_in_flight = 2;
  Gateway gw(stub, o);
  core::bounded_parallel_for(24, 8, [&](std::size_t i) {
    gw.complete(TemplateName::verify, "p" + std::to_string(i));
  });
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(ConcurrencyTest, RateLimiterSpacesRequests) {
  RateLimiter limiter(100.0);  // 10 ms apart
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limiter.acquire();
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(45));
}

TEST(ProviderConfigTest, RejectsLiteralApiKey) {
  EXPECT_THROW_CODE(ProviderConfig::from_json({{"kind", "http"}, {"api_key", "sk-123"}}),
                    Errc::invalid_argument);
  const auto c = ProviderConfig::from_json(
      {{"kind", "http"}, {"endpoint", "http://x/v1"}, {"model", "m"}, {"max_in_flight", 7}, {"max_retries", 1}});
  EXPECT_EQ(c.gateway.max_in_flight, 7);
  EXPECT_EQ(c.gateway.max_retries, 1);
  EXPECT_EQ(c.api_key_env, "OPENAI_API_KEY");
}

TEST(ScriptedProviderTest, FirstMatchingRuleWins) {
  ScriptedProvider p({{TemplateName::verify, {"alpha"}, "A"}, {std::nullopt, {}, "fallback"}});
  EXPECT_EQ(p.complete({TemplateName::verify, "with alpha", ""}), "A");
  EXPECT_EQ(p.complete({TemplateName::verify, "other", ""}), "fallback");
  ScriptedProvider strict({{TemplateName::verify, {"alpha"}, "A"}});
  EXPECT_THROW_CODE(strict.complete({TemplateName::query_gen, "alpha", ""}), Errc::transcript_miss);
}

class HttpProviderTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = ++hits_;
      last_auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (n <= failures_) {
        res.status = 503;
        return;
      }
      res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"{\"query\": \"q\"}"}}]})",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  int failures_ = 0;
  std::atomic<int> hits_{0};
  std::string last_auth_, last_body_;
};

TEST_F(HttpProviderTest, PostsDeterministicRequestAndRetries503) {
  failures_ = 2;
  Gateway gw(std::make_shared<HttpChatProvider>(endpoint(), "test-model", "secret"), fast_options(3));
  const auto r = gw.ask(TemplateName::query_gen, "the prompt", 0);
  ASSERT_TRUE(r.parse_ok()) << r.parse_error << " raw=" << r.raw_text;
  EXPECT_EQ(r.attempt_count, 3);
  EXPECT_EQ(last_auth_, "Bearer secret");
  const auto body = nlohmann::json::parse(last_body_);
  EXPECT_EQ(body["temperature"], 0);
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["messages"][0]["content"], "the prompt");
}

TEST(HttpProviderUnreachableTest, ExhaustsRetries) {
  Gateway gw(std::make_shared<HttpChatProvider>("http://127.0.0.1:1/v1/chat", "m", std::nullopt,
                                                std::chrono::seconds(1)),
             fast_options(1));
  EXPECT_THROW_CODE(gw.complete(TemplateName::main_claim, "p"), Errc::transport_exhausted);
}

}  // namespace
}  // namespace claimcheck
