#pragma once

#include <cstdint>

#include "erw/site.hpp"

namespace erw {

/// SplitMix64 generator, used to expand seeds into stream state.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

  constexpr uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

 private:
  uint64_t state_;
};

/// Deterministic per-replica random stream (xoshiro256++).
///
/// Stream identity is the pair (master seed, replica index). The state is
/// the first four outputs of SplitMix64 seeded with
///   mix64(master) + mix64(replica + 0x9E3779B97F4A7C15),
/// so distinct replicas of one master seed get unrelated streams and the
/// (seed, replica) -> walk map is reproducible run to run.
class RngStream {
 public:
  explicit RngStream(uint64_t master_seed, uint64_t replica = 0) {
    SplitMix64 sm(mix64(master_seed) + mix64(replica + 0x9E3779B97F4A7C15ull));
    for (auto& w : s_) w = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // never all-zero
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0,1) with 53 random bits.
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform draw from {0, ..., n-1} (Lemire multiply-shift with
  /// rejection on the short lane).
  uint32_t below(uint32_t n) {
    uint64_t x = next_u64() >> 32;
    uint64_t m = x * n;
    auto low = uint32_t(m);
    if (low < n) {
      const uint32_t threshold = uint32_t(-n) % n;
      while (low < threshold) {
        x = next_u64() >> 32;
        m = x * n;
        low = uint32_t(m);
      }
    }
    return uint32_t(m >> 32);
  }

 private:
  static constexpr uint64_t rotl(uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  uint64_t s_[4];
};

}  // namespace erw
