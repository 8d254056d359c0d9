#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/core/types.hpp"

namespace claimcheck::service {

enum class JobState { queued, extracting, searching, verifying, aggregating, done, failed };

std::string_view to_string(JobState s);
JobState job_state_from_string(std::string_view s);  // throws Error(parse_failure)

// Forward along queued..done (stages may be skipped), or to failed from any
// state except done. Staying put is not a transition.
bool transition_allowed(JobState from, JobState to);
bool is_terminal(JobState s);

struct LabelOverride {
  std::string job_id;
  std::string claim_id;
  std::string result_id;
  core::VerdictLabel new_label = core::VerdictLabel::baseless;
  std::string author;
  core::Timestamp at;

  friend bool operator==(const LabelOverride&, const LabelOverride&) = default;
};

struct VerificationJob {
  std::string job_id;
  JobState state = JobState::queued;
  core::Timestamp submitted_at;
  core::Timestamp updated_at;
  core::NewsArticle article;
  // Pipeline output. Overrides never touch it.
  std::optional<core::VerificationReport> report;
  // The report with every override applied and verdicts recomputed; absent
  // until the first override.
  std::optional<core::VerificationReport> reviewed_report;
  std::vector<LabelOverride> overrides;
  std::optional<std::string> error;

  const core::VerificationReport* current_report() const;

  friend bool operator==(const VerificationJob&, const VerificationJob&) = default;
};

// Lines describing broken job invariants; empty when consistent.
std::vector<std::string> check_job(const VerificationJob& job);

void to_json(nlohmann::json& j, const LabelOverride& o);
void from_json(const nlohmann::json& j, LabelOverride& o);
void to_json(nlohmann::json& j, const VerificationJob& job);
void from_json(const nlohmann::json& j, VerificationJob& job);

// Evidence with the latest override per (claim_id, result_id) applied.
// Overrides whose target is absent are ignored.
core::VerificationReport apply_overrides(core::VerificationReport report,
                                         const std::vector<LabelOverride>& overrides);

}  // namespace claimcheck::service
