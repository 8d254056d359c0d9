#include "claimcheck/service/service.hpp"

#include <algorithm>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/json.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::service {

using nlohmann::json;

json to_json(const OverrideOutcome& o) {
  return json{{"override", o.applied},
              {"claim_verdict", o.claim_verdict},
              {"article_verdict", core::to_string(o.article_verdict)},
              {"article_probability", o.article_probability}};
}

json to_json(const RerunOutcome& o) {
  return json{{"claim_id", o.claim_id},
              {"queries", o.queries},
              {"evidence", o.evidence},
              {"claim_verdict", o.claim_verdict},
              {"article_verdict", core::to_string(o.article_verdict)},
              {"article_probability", o.article_probability}};
}

VerificationService::VerificationService(std::shared_ptr<JobRunner> runner,
                                         std::shared_ptr<JobStore> store, ServiceOptions options)
    : runner_(std::move(runner)),
      store_(std::move(store)),
      options_(std::move(options)),
      ids_(options_.id_seed) {
  if (!runner_ || !store_) throw Error(Errc::invalid_argument, "service needs a runner and a store");
  if (options_.workers == 0) throw Error(Errc::invalid_argument, "workers must be positive");

  // Recover after a restart: queued jobs run again, half-finished ones fail.
  std::vector<std::shared_ptr<const VerificationJob>> pending;
  for (const auto& id : store_->job_ids()) {
    auto job = store_->get(id);
    if (job->state == JobState::queued) {
      pending.push_back(job);
    } else if (!is_terminal(job->state)) {
      store_->update(id, [&](VerificationJob& j) {
        j.state = JobState::failed;
        j.error = "interrupted by service restart";
        j.updated_at = std::max(options_.clock(), j.updated_at);
      });
      ledger("state", id, {{"state", "failed"}, {"error", "interrupted by service restart"}});
    }
  }
  std::sort(pending.begin(), pending.end(),
            [](const auto& a, const auto& b) { return a->job_id < b->job_id; });
  for (const auto& job : pending) queue_.push_back(job->job_id);

  if (options_.start_workers) {
    for (std::size_t i = 0; i < options_.workers; ++i) {
      workers_.emplace_back([this](std::stop_token st) { worker_loop(st); });
    }
  }
}

VerificationService::~VerificationService() {
  for (auto& w : workers_) w.request_stop();
  queue_cv_.notify_all();
  workers_.clear();
}

void VerificationService::ledger(const std::string& type, const std::string& job_id, json fields) {
  json record = fields.is_object() ? std::move(fields) : json::object();
  record["type"] = type;
  record["job_id"] = job_id;
  record["at"] = options_.clock();
  store_->append_ledger(record);
}

std::string VerificationService::unique_article_id(const core::NewsArticle& article) const {
  const std::string base =
      "art-" + core::sha256_hex(article.title + "\n" + article.body).substr(0, 16);
  std::vector<std::string> taken;
  for (const auto& id : store_->job_ids()) taken.push_back(store_->get(id)->article.id);
  std::string candidate = base;
  for (int n = 2; std::find(taken.begin(), taken.end(), candidate) != taken.end(); ++n) {
    candidate = base + "-" + std::to_string(n);
  }
  return candidate;
}

std::string VerificationService::submit(std::string_view payload) {
  if (payload.size() > options_.max_payload_bytes) {
    throw Error(Errc::payload_too_large, "payload of " + std::to_string(payload.size()) +
                                             " bytes exceeds " +
                                             std::to_string(options_.max_payload_bytes));
  }
  json j;
  try {
    j = json::parse(payload);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("request body is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::parse_failure, "request body must be a JSON object");
  core::NewsArticle article;
  try {
    article.id = j.value("id", "");
    article.title = j.value("title", "");
    article.body = j.value("body", "");
    if (j.contains("url") && !j["url"].is_null()) article.url = j["url"].get<std::string>();
    if (j.contains("published_at") && !j["published_at"].is_null()) {
      article.published_at = j["published_at"].get<core::Timestamp>();
    }
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad article fields: ") + e.what());
  }
  return submit(std::move(article));
}

std::string VerificationService::submit(core::NewsArticle article) {
  if (core::trim(article.body).empty()) throw Error(Errc::empty_body, "article body is empty");
  const std::size_t size = article.title.size() + article.body.size();
  if (size > options_.max_payload_bytes) {
    throw Error(Errc::payload_too_large, "article exceeds " +
                                             std::to_string(options_.max_payload_bytes) + " bytes");
  }

  std::string job_id;
  {
    std::lock_guard lock(submit_mutex_);
    if (article.id.empty()) {
      article.id = unique_article_id(article);
    } else {
      for (const auto& id : store_->job_ids()) {
        if (store_->get(id)->article.id == article.id) {
          throw Error(Errc::invalid_argument, "article id " + article.id + " already submitted");
        }
      }
    }
    const core::Timestamp now = options_.clock();
    job_id = ids_.next(now);
    VerificationJob job;
    job.job_id = job_id;
    job.state = JobState::queued;
    job.submitted_at = now;
    job.updated_at = now;
    job.article = article;
    store_->create(std::move(job));
  }
  ledger("submitted", job_id, {{"article", article}});
  enqueue(job_id);
  return job_id;
}

void VerificationService::enqueue(const std::string& job_id) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(job_id);
  }
  queue_cv_.notify_one();
}

void VerificationService::worker_loop(std::stop_token stop) {
  while (true) {
    std::string job_id;
    {
      std::unique_lock lock(queue_mutex_);
      if (!queue_cv_.wait(lock, stop, [&] { return !queue_.empty(); })) return;
      job_id = std::move(queue_.front());
      queue_.pop_front();
    }
    execute(job_id);
  }
}

void VerificationService::run_pending() {
  while (true) {
    std::string job_id;
    {
      std::lock_guard lock(queue_mutex_);
      if (queue_.empty()) return;
      job_id = std::move(queue_.front());
      queue_.pop_front();
    }
    execute(job_id);
  }
}

void VerificationService::transition(const std::string& job_id, JobState to) {
  // Re-announcing the current stage is a no-op.
  if (store_->get(job_id)->state == to) return;
  store_->update(job_id, [&](VerificationJob& j) {
    j.state = to;
    j.updated_at = std::max(options_.clock(), j.updated_at);
  });
  ledger("state", job_id, {{"state", to_string(to)}});
}

void VerificationService::execute(const std::string& job_id) {
  const auto job = store_->get(job_id);
  try {
    core::VerificationReport report =
        runner_->run(job->article, [&](JobState s) { transition(job_id, s); });
    store_->update(job_id, [&](VerificationJob& j) {
      j.state = JobState::done;
      j.report = report;
      j.updated_at = std::max(options_.clock(), j.updated_at);
    });
    for (const auto& e : report.evidence) {
      ledger("evidence", job_id, {{"item", e}});
    }
    ledger("state", job_id, {{"state", "done"}, {"content_hash", report.content_hash}});
  } catch (const std::exception& e) {
    const std::string message = e.what();
    try {
      store_->update(job_id, [&](VerificationJob& j) {
        j.state = JobState::failed;
        j.error = message;
        j.updated_at = std::max(options_.clock(), j.updated_at);
      });
      ledger("state", job_id, {{"state", "failed"}, {"error", message}});
    } catch (const std::exception&) {
      // Already terminal; nothing sensible left to record.
    }
  }
  { std::lock_guard lock(done_mutex_); }
  done_cv_.notify_all();
}

bool VerificationService::wait(const std::string& job_id, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(done_mutex_);
  return done_cv_.wait_for(lock, timeout, [&] { return is_terminal(store_->get(job_id)->state); });
}

VerificationJob VerificationService::get_job(const std::string& job_id) const {
  return *store_->get(job_id);
}

core::VerificationReport VerificationService::get_report(const std::string& job_id) const {
  const auto job = store_->get(job_id);
  if (job->state != JobState::done) {
    throw Error(Errc::job_not_done, "job " + job_id + " is " + std::string(to_string(job->state)));
  }
  return *job->current_report();
}

namespace {

const core::ClaimVerdict& verdict_for(const core::VerificationReport& r, const std::string& claim_id) {
  for (const auto& v : r.claim_verdicts) {
    if (v.claim_id == claim_id) return v;
  }
  throw Error(Errc::not_found, "no verdict for claim " + claim_id);
}

void require_done(const VerificationJob& j) {
  if (j.state != JobState::done) {
    throw Error(Errc::job_not_done, "job " + j.job_id + " is " + std::string(to_string(j.state)));
  }
}

}  // namespace

OverrideOutcome VerificationService::apply_override(LabelOverride o) {
  OverrideOutcome outcome;
  store_->update(o.job_id, [&](VerificationJob& j) {
    require_done(j);
    const auto& ev = j.report->evidence;
    const bool exists = std::any_of(ev.begin(), ev.end(), [&](const core::EvidenceItem& e) {
      return e.claim_id == o.claim_id && e.result.id == o.result_id;
    });
    if (!exists) {
      throw Error(Errc::not_found,
                  "no evidence " + o.result_id + " for claim " + o.claim_id + " in job " + o.job_id);
    }
    o.at = options_.clock();
    j.overrides.push_back(o);
    j.reviewed_report = runner_->rescore(apply_overrides(*j.report, j.overrides));
    j.updated_at = std::max(o.at, j.updated_at);
    outcome.applied = o;
    outcome.claim_verdict = verdict_for(*j.reviewed_report, o.claim_id);
    outcome.article_verdict = j.reviewed_report->article_verdict;
    outcome.article_probability = j.reviewed_report->article_probability;
  });
  ledger("override", o.job_id, {{"override", o}});
  return outcome;
}

RerunOutcome VerificationService::rerun_claim(const std::string& job_id, const std::string& claim_id) {
  RerunOutcome outcome;
  std::vector<core::EvidenceItem> archived;
  // Holding the job's write lock for the whole rerun keeps writes to this job
  // serialized; readers keep seeing the previous snapshot meanwhile.
  store_->update(job_id, [&](VerificationJob& j) {
    require_done(j);
    for (const auto& e : j.report->evidence) {
      if (e.claim_id == claim_id) archived.push_back(e);
    }
    j.report = runner_->rerun_claim(*j.report, claim_id);
    if (!j.overrides.empty()) {
      j.reviewed_report = runner_->rescore(apply_overrides(*j.report, j.overrides));
    }
    j.updated_at = std::max(options_.clock(), j.updated_at);
    const core::VerificationReport& current = *j.current_report();
    outcome.claim_id = claim_id;
    for (const auto& q : current.queries) {
      if (q.claim_id == claim_id) outcome.queries.push_back(q);
    }
    for (const auto& e : current.evidence) {
      if (e.claim_id == claim_id) outcome.evidence.push_back(e);
    }
    outcome.claim_verdict = verdict_for(current, claim_id);
    outcome.article_verdict = current.article_verdict;
    outcome.article_probability = current.article_probability;
  });
  ledger("rerun", job_id, {{"claim_id", claim_id}, {"archived_evidence", archived}});
  for (const auto& e : outcome.evidence) ledger("evidence", job_id, {{"item", e}});
  return outcome;
}

}  // namespace claimcheck::service
