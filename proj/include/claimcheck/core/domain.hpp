#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace claimcheck::core {

// Lowercased host of an absolute URL ("https://www.AP.org:443/x" -> "www.ap.org").
std::optional<std::string> url_host(std::string_view url);

// Publisher key for a host: lowercase, leading "www." removed, reduced to the
// registrable domain (public suffix + one label). Only a built-in list of
// common multi-label suffixes is recognised ("co.uk", "com.au", ...).
std::string registrable_domain(std::string_view host);

// registrable_domain(url_host(url)), or "" when the URL has no host.
std::string domain_of_url(std::string_view url);

}  // namespace claimcheck::core
