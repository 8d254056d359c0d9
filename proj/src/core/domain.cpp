#include "claimcheck/core/domain.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "claimcheck/core/text.hpp"

namespace claimcheck::core {

namespace {

// Second-level public suffixes under which publishers register a third label.
constexpr std::array<std::string_view, 40> kMultiLabelSuffixes = {
    "co.uk",  "org.uk", "ac.uk",  "gov.uk", "ltd.uk", "me.uk",  "net.uk", "co.jp",
    "ne.jp",  "or.jp",  "ac.jp",  "com.au", "net.au", "org.au", "gov.au", "edu.au",
    "co.nz",  "org.nz", "co.in",  "gov.in", "com.br", "gov.br", "com.cn", "gov.cn",
    "com.hk", "com.sg", "com.tw", "co.kr",  "or.kr",  "co.za",  "org.za", "gov.za",
    "com.mx", "com.ar", "com.tr", "co.il",  "com.ng", "com.pk", "com.my", "com.ph",
};

bool is_ip_literal(std::string_view host) {
  if (host.empty()) return false;
  if (host.front() == '[') return true;
  return std::all_of(host.begin(), host.end(),
                     [](char c) { return (c >= '0' && c <= '9') || c == '.'; });
}

}  // namespace

std::optional<std::string> url_host(std::string_view url) {
  url = trim(url);
  std::size_t start = 0;
  if (auto scheme = url.find("://"); scheme != std::string_view::npos) {
    start = scheme + 3;
  } else if (url.substr(0, 2) == "//") {
    start = 2;
  }
  std::string_view rest = url.substr(start);
  const std::size_t end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  std::string_view host = authority;
  if (!host.empty() && host.front() == '[') {
    const auto close = host.find(']');
    host = host.substr(0, close == std::string_view::npos ? host.size() : close + 1);
  } else if (auto colon = host.find(':'); colon != std::string_view::npos) {
    host = host.substr(0, colon);
  }
  while (!host.empty() && host.back() == '.') host.remove_suffix(1);
  if (host.empty()) return std::nullopt;
  return casefold(host);
}

std::string registrable_domain(std::string_view host_in) {
  std::string host = casefold(trim(host_in));
  while (!host.empty() && host.back() == '.') host.pop_back();
  if (is_ip_literal(host)) return host;
  if (host.rfind("www.", 0) == 0) host.erase(0, 4);

  std::vector<std::string_view> labels;
  std::string_view view(host);
  std::size_t pos = 0;
  while (pos <= view.size()) {
    const std::size_t dot = view.find('.', pos);
    const std::size_t stop = dot == std::string_view::npos ? view.size() : dot;
    if (stop > pos) labels.push_back(view.substr(pos, stop - pos));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  if (labels.size() <= 2) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out.push_back('.');
      out.append(labels[i]);
    }
    return out;
  }
  const std::size_t n = labels.size();
  const std::string last_two = std::string(labels[n - 2]) + "." + std::string(labels[n - 1]);
  const bool multi = std::find(kMultiLabelSuffixes.begin(), kMultiLabelSuffixes.end(),
                               last_two) != kMultiLabelSuffixes.end();
  if (!multi) return last_two;
  return std::string(labels[n - 3]) + "." + last_two;
}

std::string domain_of_url(std::string_view url) {
  auto host = url_host(url);
  return host ? registrable_domain(*host) : std::string();
}

}  // namespace claimcheck::core
