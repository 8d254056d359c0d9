#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "claimcheck/service/job.hpp"
#include "claimcheck/service/pipeline.hpp"
#include "claimcheck/service/store.hpp"
#include "claimcheck/service/ulid.hpp"

namespace claimcheck::service {

inline constexpr std::size_t kMaxPayloadBytes = 1 << 20;
inline constexpr std::size_t kDefaultWorkers = 4;

struct ServiceOptions {
  std::size_t workers = kDefaultWorkers;
  std::size_t max_payload_bytes = kMaxPayloadBytes;
  core::Clock clock = core::Timestamp::now;
  // Fixes the job-id random stream; unset means seeded from the OS.
  std::optional<std::uint64_t> id_seed;
  // Workers start with the service; disable to drive jobs with run_pending().
  bool start_workers = true;
};

struct OverrideOutcome {
  LabelOverride applied;
  core::ClaimVerdict claim_verdict;
  core::ArticleVerdict article_verdict = core::ArticleVerdict::unverified;
  double article_probability = 0.5;
};

struct RerunOutcome {
  std::string claim_id;
  std::vector<core::SearchQuery> queries;
  std::vector<core::EvidenceItem> evidence;
  core::ClaimVerdict claim_verdict;
  core::ArticleVerdict article_verdict = core::ArticleVerdict::unverified;
  double article_probability = 0.5;
};

nlohmann::json to_json(const OverrideOutcome& o);
nlohmann::json to_json(const RerunOutcome& o);

// Verification jobs on a bounded worker pool over a FIFO queue. Every state
// change, evidence item, override and rerun is appended to the store ledger.
class VerificationService {
 public:
  VerificationService(std::shared_ptr<JobRunner> runner, std::shared_ptr<JobStore> store,
                      ServiceOptions options = {});
  ~VerificationService();

  VerificationService(const VerificationService&) = delete;
  VerificationService& operator=(const VerificationService&) = delete;

  // Raw request body: {"body", "title"?, "id"?, "url"?, "published_at"?}.
  // Throws Error(payload_too_large) above the byte limit, Error(empty_body)
  // for a blank body and Error(parse_failure) for malformed JSON.
  std::string submit(std::string_view payload);
  // An empty article id is replaced by a digest of the title and body, so
  // replaying the same article gives the same report. A caller-supplied id
  // already in the store is rejected with Error(invalid_argument).
  std::string submit(core::NewsArticle article);

  VerificationJob get_job(const std::string& job_id) const;  // Error(not_found)
  // The reviewed report when overrides exist, else the pipeline report.
  // Throws Error(not_found) or Error(job_not_done).
  core::VerificationReport get_report(const std::string& job_id) const;

  // Throws Error(not_found) for an unknown job, claim or result and
  // Error(job_not_done) before the job is done.
  OverrideOutcome apply_override(LabelOverride override);
  RerunOutcome rerun_claim(const std::string& job_id, const std::string& claim_id);

  nlohmann::json registry() const { return runner_->registry_json(); }

  // Blocks until the job reaches done or failed; false on timeout.
  bool wait(const std::string& job_id, std::chrono::milliseconds timeout) const;
  // Runs queued jobs on the calling thread until the queue is empty.
  void run_pending();

  JobStore& store() { return *store_; }

 private:
  void worker_loop(std::stop_token stop);
  void execute(const std::string& job_id);
  void enqueue(const std::string& job_id);
  void ledger(const std::string& type, const std::string& job_id, nlohmann::json fields = {});
  void transition(const std::string& job_id, JobState to);
  std::string unique_article_id(const core::NewsArticle& article) const;

  std::shared_ptr<JobRunner> runner_;
  std::shared_ptr<JobStore> store_;
  ServiceOptions options_;
  UlidGenerator ids_;

  std::mutex queue_mutex_;
  std::condition_variable_any queue_cv_;
  std::deque<std::string> queue_;

  mutable std::mutex done_mutex_;
  mutable std::condition_variable done_cv_;

  std::mutex submit_mutex_;
  std::vector<std::jthread> workers_;
};

}  // namespace claimcheck::service
