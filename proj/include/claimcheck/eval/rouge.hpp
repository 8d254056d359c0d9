#pragma once

#include <string_view>

#include "claimcheck/eval/metrics.hpp"

namespace claimcheck::eval {

enum class RougeVariant { r1, r2, rl };

RougeVariant rouge_variant_from_string(std::string_view s);  // throws Error(parse_failure)

// Tokens are case-folded alphanumeric runs. r1/r2 use clipped n-gram
// overlap, rl the longest common subsequence. An empty side scores 0.
Prf rouge(std::string_view candidate, std::string_view reference, RougeVariant variant);

}  // namespace claimcheck::eval
