#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "erw/site.hpp"

namespace erw {

/// Connectivity convention for configuration legality.
///
/// A walk can build columns over (x, y) positions that never touch each
/// other, so the raw configuration may be disconnected even though every
/// column is anchored to the floor. FloorAdjoined treats the floor plane as
/// connective tissue: a component is attached when it contains a z == 1
/// vertex. Strict demands nearest-neighbour connectivity of the
/// configuration itself.
enum class Connectivity { FloorAdjoined, Strict };

struct LegalityVerdict {
  bool legal = false;
  std::string reason;            // empty when legal
  std::optional<Site> witness;   // first violating site, when meaningful

  explicit operator bool() const { return legal; }
};

/// Checks that a finite set of sites is a configuration some walk could
/// have produced: non-floor, downward-closed, and connected under the
/// chosen convention.
LegalityVerdict is_legal_configuration(std::span<const Site> config,
                                       Connectivity convention =
                                           Connectivity::FloorAdjoined);

}  // namespace erw
