#include "claimcheck/aggregation/registry.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "claimcheck/core/domain.hpp"
#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/text.hpp"

namespace claimcheck::aggregation {

namespace {

void check_tier(int tier, const std::string& what) {
  if (tier < core::kMinTier || tier > core::kMaxTier) {
    throw Error(Errc::invalid_argument,
                what + ": tier " + std::to_string(tier) + " outside 1..5");
  }
}

}  // namespace

CredibilityRegistry::CredibilityRegistry(std::map<std::string, int> entries, int default_tier)
    : default_tier_(default_tier) {
  check_tier(default_tier, "default tier");
  for (auto& [domain, tier] : entries) {
    check_tier(tier, domain);
    entries_[core::registrable_domain(domain)] = tier;
  }
}

CredibilityRegistry CredibilityRegistry::parse_tsv(std::string_view text, int default_tier) {
  std::map<std::string, int> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = core::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto tab = t.find('\t');
    const auto where = "registry line " + std::to_string(line_no);
    if (tab == std::string_view::npos) throw Error(Errc::parse_failure, where + ": expected a tab");
    const auto domain = core::trim(t.substr(0, tab));
    const auto tier_text = core::trim(t.substr(tab + 1));
    int tier = 0;
    const auto [end, ec] = std::from_chars(tier_text.data(), tier_text.data() + tier_text.size(), tier);
    if (domain.empty() || ec != std::errc{} || end != tier_text.data() + tier_text.size() ||
        tier < core::kMinTier || tier > core::kMaxTier) {
      throw Error(Errc::parse_failure, where + ": bad entry \"" + std::string(t) + "\"");
    }
    entries[std::string(domain)] = tier;
  }
  return CredibilityRegistry(std::move(entries), default_tier);
}

CredibilityRegistry CredibilityRegistry::load_tsv(const std::string& path, int default_tier) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot read registry " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tsv(buf.str(), default_tier);
}

int CredibilityRegistry::tier(std::string_view domain) const {
  const auto it = entries_.find(core::registrable_domain(domain));
  return it == entries_.end() ? default_tier_ : it->second;
}

nlohmann::json CredibilityRegistry::to_json() const {
  return nlohmann::json{{"default_tier", default_tier_}, {"entries", entries_}};
}

std::vector<core::EvidenceItem> assign_tiers(std::vector<core::EvidenceItem> evidence,
                                             const CredibilityRegistry& registry) {
  for (auto& e : evidence) {
    const std::string& d = e.result.domain.empty() ? e.result.url : e.result.domain;
    e.source_tier = registry.tier(e.result.domain.empty() ? core::domain_of_url(d) : d);
  }
  return evidence;
}

}  // namespace claimcheck::aggregation
