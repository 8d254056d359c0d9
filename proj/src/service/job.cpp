#include "claimcheck/service/job.hpp"

#include <map>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/json.hpp"

namespace claimcheck::service {

using nlohmann::json;

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::queued: return "queued";
    case JobState::extracting: return "extracting";
    case JobState::searching: return "searching";
    case JobState::verifying: return "verifying";
    case JobState::aggregating: return "aggregating";
    case JobState::done: return "done";
    case JobState::failed: return "failed";
  }
  return "failed";
}

JobState job_state_from_string(std::string_view s) {
  for (JobState st : {JobState::queued, JobState::extracting, JobState::searching,
                      JobState::verifying, JobState::aggregating, JobState::done,
                      JobState::failed}) {
    if (to_string(st) == s) return st;
  }
  throw Error(Errc::parse_failure, "invalid job state: \"" + std::string(s) + "\"");
}

bool is_terminal(JobState s) { return s == JobState::done || s == JobState::failed; }

bool transition_allowed(JobState from, JobState to) {
  if (is_terminal(from)) return false;
  if (to == JobState::failed) return true;
  return static_cast<int>(to) > static_cast<int>(from);
}

const core::VerificationReport* VerificationJob::current_report() const {
  if (reviewed_report) return &*reviewed_report;
  if (report) return &*report;
  return nullptr;
}

std::vector<std::string> check_job(const VerificationJob& job) {
  std::vector<std::string> out;
  if (job.job_id.empty()) out.push_back("empty job_id");
  if ((job.state == JobState::done) != job.report.has_value()) {
    out.push_back("report must be present iff state is done");
  }
  if (job.reviewed_report && !job.report) out.push_back("reviewed report without report");
  if (job.state == JobState::failed && !job.error) out.push_back("failed job without error");
  if (job.updated_at < job.submitted_at) out.push_back("updated_at before submitted_at");
  return out;
}

void to_json(json& j, const LabelOverride& o) {
  j = json{{"job_id", o.job_id},       {"claim_id", o.claim_id}, {"result_id", o.result_id},
           {"new_label", o.new_label}, {"author", o.author},     {"at", o.at}};
}

void from_json(const json& j, LabelOverride& o) {
  try {
    o.job_id = j.value("job_id", "");
    o.claim_id = j.at("claim_id").get<std::string>();
    o.result_id = j.at("result_id").get<std::string>();
    o.new_label = j.at("new_label").get<core::VerdictLabel>();
    o.author = j.value("author", "");
    o.at = j.contains("at") ? j.at("at").get<core::Timestamp>() : core::Timestamp{};
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad override: ") + e.what());
  }
}

void to_json(json& j, const VerificationJob& job) {
  j = json{{"job_id", job.job_id},
           {"state", to_string(job.state)},
           {"submitted_at", job.submitted_at},
           {"updated_at", job.updated_at},
           {"article", job.article},
           {"overrides", job.overrides}};
  j["report"] = job.report ? json(*job.report) : json(nullptr);
  if (job.reviewed_report) j["reviewed_report"] = *job.reviewed_report;
  j["error"] = job.error ? json(*job.error) : json(nullptr);
}

void from_json(const json& j, VerificationJob& job) {
  try {
    job.job_id = j.at("job_id").get<std::string>();
    job.state = job_state_from_string(j.at("state").get<std::string>());
    job.submitted_at = j.at("submitted_at").get<core::Timestamp>();
    job.updated_at = j.at("updated_at").get<core::Timestamp>();
    job.article = j.at("article").get<core::NewsArticle>();
    job.overrides = j.value("overrides", std::vector<LabelOverride>{});
    job.report.reset();
    job.reviewed_report.reset();
    job.error.reset();
    if (j.contains("report") && !j["report"].is_null()) {
      job.report = j["report"].get<core::VerificationReport>();
    }
    if (j.contains("reviewed_report") && !j["reviewed_report"].is_null()) {
      job.reviewed_report = j["reviewed_report"].get<core::VerificationReport>();
    }
    if (j.contains("error") && !j["error"].is_null()) job.error = j["error"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("bad job snapshot: ") + e.what());
  }
}

core::VerificationReport apply_overrides(core::VerificationReport report,
                                         const std::vector<LabelOverride>& overrides) {
  std::map<std::pair<std::string, std::string>, const LabelOverride*> latest;
  for (const auto& o : overrides) latest[{o.claim_id, o.result_id}] = &o;
  for (auto& e : report.evidence) {
    auto it = latest.find({e.claim_id, e.result.id});
    if (it == latest.end() || it->second->new_label == e.label) continue;
    const LabelOverride& o = *it->second;
    e.label = o.new_label;
    const std::string who = o.author.empty() ? "reviewer" : o.author;
    e.rationale = e.rationale.empty() ? "label set by " + who
                                      : "label set by " + who + "; model said: " + e.rationale;
  }
  return report;
}

}  // namespace claimcheck::service
