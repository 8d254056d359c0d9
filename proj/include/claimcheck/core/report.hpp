#pragma once

#include <string>
#include <vector>

#include "claimcheck/core/types.hpp"

namespace claimcheck::core {

inline constexpr int kMaxQueriesPerClaim = 3;

// Claims by (granularity, ordinal), queries by (claim_id, rank), evidence by
// (claim_id, domain, url, query_rank, result id), verdicts by claim_id.
VerificationReport canonical_sort(VerificationReport report);

void sort_evidence(std::vector<EvidenceItem>& evidence);

// SHA-256 over the canonical JSON of every semantic field. retrieved_at and
// content_hash itself are excluded.
std::string compute_content_hash(const VerificationReport& report);

// canonical_sort + content_hash in one step.
VerificationReport seal(VerificationReport report);

// One human-readable line per broken invariant; empty when the report is
// well formed.
std::vector<std::string> validate(const VerificationReport& report);

}  // namespace claimcheck::core
