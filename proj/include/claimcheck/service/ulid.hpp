#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <string>

#include "claimcheck/core/types.hpp"

namespace claimcheck::service {

inline constexpr std::size_t kUlidLength = 26;

// 48-bit millisecond time followed by 80 random bits, Crockford base32.
// Within one millisecond the random part is incremented, so ids from one
// generator sort in creation order.
class UlidGenerator {
 public:
  // Unset seed draws one from std::random_device.
  explicit UlidGenerator(std::optional<std::uint64_t> seed = std::nullopt);

  std::string next(core::Timestamp at);

 private:
  std::mutex mutex_;
  std::mt19937_64 rng_;
  std::int64_t last_ms_ = -1;
  std::uint16_t rand_hi_ = 0;  // top 16 of the 80 random bits
  std::uint64_t rand_lo_ = 0;
};

bool is_ulid(std::string_view s);

}  // namespace claimcheck::service
