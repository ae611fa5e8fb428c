#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>

namespace erw {

/// A lattice point. In half-space contexts z >= 0 and z == 0 is the floor.
struct Site {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  friend constexpr auto operator<=>(const Site&, const Site&) = default;
};

inline constexpr Site kOrigin{0, 0, 0};

/// The three step regimes of the walk at its current vertex.
enum class StepKind : uint8_t { Floor, Visited, New };

/// Nearest-neighbour displacements. Entries 0..4 (four sides, then up) are
/// the floor moves; entries 0..5 are the simple-random-walk moves. Index 5
/// is the downward move. Draw mappings elsewhere rely on this order.
inline constexpr int8_t kMoves[6][3] = {
    {+1, 0, 0}, {-1, 0, 0}, {0, +1, 0}, {0, -1, 0}, {0, 0, +1}, {0, 0, -1},
};

inline constexpr Site offset(Site s, int m) {
  return Site{s.x + kMoves[m][0], s.y + kMoves[m][1], s.z + kMoves[m][2]};
}

/// SplitMix64 finalizer; used both as a hash mixer and for seed derivation.
inline constexpr uint64_t mix64(uint64_t v) {
  v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ull;
  v = (v ^ (v >> 27)) * 0x94D049BB133111EBull;
  return v ^ (v >> 31);
}

// Coordinates are packed into 21/21/22 bits. Walks at desk scale stay within
// a few thousand lattice units of the origin, so the range is generous.
inline constexpr int32_t kCoordLimit = 1 << 20;

inline constexpr uint64_t pack_xy(int32_t x, int32_t y) {
  return (uint64_t(uint32_t(x + kCoordLimit)) << 21) |
         uint64_t(uint32_t(y + kCoordLimit));
}

inline constexpr uint64_t pack_site(const Site& s) {
  return (pack_xy(s.x, s.y) << 22) | uint64_t(uint32_t(s.z));
}

struct SiteHash {
  size_t operator()(const Site& s) const { return size_t(mix64(pack_site(s))); }
};

struct XYHash {
  size_t operator()(uint64_t key) const { return size_t(mix64(key)); }
};

}  // namespace erw
