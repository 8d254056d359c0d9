#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace claimcheck {

enum class Errc {
  invalid_argument,
  parse_failure,
  missing_placeholder,
  transport_exhausted,
  transcript_miss,
  empty_article,
  extraction_failure,
  generation_failure,
  backend_unreachable,
  corpus_missing,
  degenerate_labels,
  empty_rows,
  empty_verdicts,
  length_mismatch,
  k_too_large,
  non_fake_gold,
  not_found,
  job_not_done,
  payload_too_large,
  empty_body,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for every contract error; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace claimcheck
