#pragma once

#include <json.hpp>

#include "claimcheck/core/types.hpp"

namespace claimcheck::core {

using nlohmann::json;

void to_json(json& j, const Timestamp& t);
void from_json(const json& j, Timestamp& t);

void to_json(json& j, const NewsArticle& a);
void from_json(const json& j, NewsArticle& a);

void to_json(json& j, const Claim& c);
void from_json(const json& j, Claim& c);

void to_json(json& j, const SearchQuery& q);
void from_json(const json& j, SearchQuery& q);

void to_json(json& j, const SearchResult& r);
void from_json(const json& j, SearchResult& r);

void to_json(json& j, const EvidenceItem& e);
void from_json(const json& j, EvidenceItem& e);

void to_json(json& j, const ClaimVerdict& v);
void from_json(const json& j, ClaimVerdict& v);

void to_json(json& j, const VerificationReport& r);
void from_json(const json& j, VerificationReport& r);

void to_json(json& j, VerdictLabel l);
void from_json(const json& j, VerdictLabel& l);

// Evidence ledger line: one EvidenceItem as compact JSON, no trailing newline.
std::string to_jsonl_line(const EvidenceItem& e);
EvidenceItem evidence_from_jsonl_line(std::string_view line);

}  // namespace claimcheck::core
