#include "claimcheck/service/ulid.hpp"

#include <array>

namespace claimcheck::service {

namespace {

constexpr std::string_view kCrockford = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

}  // namespace

UlidGenerator::UlidGenerator(std::optional<std::uint64_t> seed)
    : rng_(seed ? *seed : std::random_device{}()) {}

std::string UlidGenerator::next(core::Timestamp at) {
  std::lock_guard lock(mutex_);
  const std::int64_t ms = std::max<std::int64_t>(at.unix_millis(), last_ms_);
  if (ms == last_ms_) {
    if (++rand_lo_ == 0) ++rand_hi_;
  } else {
    last_ms_ = ms;
    rand_hi_ = static_cast<std::uint16_t>(rng_());
    rand_lo_ = rng_();
  }

  // 128-bit value: 48 time bits, then 16 + 64 random bits. Only the low 130
  // bits of the 26 symbols matter, the top two are zero.
  const std::uint64_t t = static_cast<std::uint64_t>(ms) & ((1ULL << 48) - 1);
  const std::uint64_t hi = (t << 16) | rand_hi_;
  const std::uint64_t lo = rand_lo_;
  std::string out(kUlidLength, '0');
  for (std::size_t i = 0; i < kUlidLength; ++i) {
    const std::size_t bit = 5 * (kUlidLength - 1 - i);  // low bit of symbol i
    std::uint64_t v = 0;
    if (bit >= 64) {
      v = hi >> (bit - 64);
    } else {
      v = lo >> bit;
      if (bit > 59) v |= hi << (64 - bit);
    }
    out[i] = kCrockford[v & 31];
  }
  return out;
}

bool is_ulid(std::string_view s) {
  if (s.size() != kUlidLength || s[0] > '7') return false;
  for (char c : s) {
    if (kCrockford.find(c) == std::string_view::npos) return false;
  }
  return true;
}

}  // namespace claimcheck::service
