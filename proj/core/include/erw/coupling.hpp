#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "erw/rng.hpp"
#include "erw/site.hpp"
#include "erw/visited_store.hpp"
#include "erw/walk.hpp"

namespace erw {

/// Raised in checked mode when a step breaks one of the pair invariants.
struct CouplingViolation : std::logic_error {
  CouplingViolation(int item_, uint64_t tau_, const std::string& what_)
      : std::logic_error("coupling invariant " + std::to_string(item_) +
                         " broken at tau=" + std::to_string(tau_) + ": " +
                         what_),
        item(item_),
        tau(tau_) {}
  int item;
  uint64_t tau;
};

/// Two walks driven on one random source so that the one with the smaller
/// starting configuration never rises above the other.
///
/// Per coupling step exactly one rule fires:
///   (i)   same vertex kind      -> one draw, both make the same move
///   (ii)  one at a new vertex   -> it drops, the other waits (no draw)
///   (iii) one visited/one floor -> the visited walker moves; a downward
///         move makes the floor walker wait, anything else is copied.
/// The per-step invariants (equal x/y, matched z-minus-wait, z_R <= z_S,
/// and subset/closure of the visited sets whenever S is off new vertices)
/// are asserted after every step in checked mode.
class CouplingState {
 public:
  /// Both walkers start at `w`; vis_r and vis_s are legal configurations
  /// with vis_r a subset of vis_s. `target` is the floor vertex whose
  /// visits are compared. Throws std::invalid_argument otherwise.
  CouplingState(Site w, std::span<const Site> vis_r,
                std::span<const Site> vis_s, Site target, bool checked);

  void step(RngStream& rng);

  const WalkState<ColumnStore>& lower() const { return r_; }
  const WalkState<ColumnStore>& upper() const { return s_; }
  uint64_t wait_lower() const { return wait_r_; }
  uint64_t wait_upper() const { return wait_s_; }
  uint64_t tau() const { return tau_; }
  uint64_t real_time_lower() const { return tau_ - wait_r_; }
  uint64_t real_time_upper() const { return tau_ - wait_s_; }

  /// Visits to the target within the first `horizon` real moves of each
  /// walker (visit counting caps at the horizon even if the coupling ran
  /// longer).
  uint64_t capped_visits_lower() const { return visits_r_; }
  uint64_t capped_visits_upper() const { return visits_s_; }
  void set_horizon(uint64_t t) { horizon_ = t; }

 private:
  void check_invariants();

  WalkState<ColumnStore> r_;
  WalkState<ColumnStore> s_;
  Site target_;
  uint64_t wait_r_ = 0;
  uint64_t wait_s_ = 0;
  uint64_t tau_ = 0;
  uint64_t horizon_ = ~uint64_t(0);
  uint64_t visits_r_ = 0;
  uint64_t visits_s_ = 0;
  bool checked_;
  std::vector<Site> pending_subset_;  // R-additions awaiting the next
                                      // subset check against Vis_S
};

struct DominanceReport {
  uint64_t visits_lower = 0;   // V_R(t; v)
  uint64_t visits_upper = 0;   // V_S(t; v)
  uint64_t wait_lower = 0;
  uint64_t wait_upper = 0;
  uint64_t coupling_steps = 0;
  bool dominance_ok = false;   // visits_lower >= visits_upper
  std::optional<std::string> violation;
};

/// Runs one coupled pair until both walkers complete `t` real moves and
/// reports the visit counts to `v`. In checked mode every invariant is
/// asserted per step and any violation lands in the report.
DominanceReport run_coupling(Site w, std::span<const Site> vis_r,
                             std::span<const Site> vis_s, uint64_t t, Site v,
                             bool checked, RngStream& rng);

struct ConditionedVisitReport {
  uint64_t replicas = 0;
  uint64_t conditioning_events = 0;  // paths that reached v within t
  double conditioned_mean = 0.0;     // E(V | V != 0) estimate
  double conditioned_se = 0.0;
  double origin_mean = 0.0;          // E V(t; 0) estimate
  double origin_se = 0.0;
  bool enough_events = false;
  /// conditioned <= origin within `sigmas` combined standard errors.
  bool within(double sigmas) const {
    const double se =
        std::sqrt(conditioned_se * conditioned_se + origin_se * origin_se);
    return conditioned_mean <= origin_mean + sigmas * se;
  }
};

/// Monte Carlo check that visits conditioned on reaching a floor vertex v
/// are no more frequent than returns to the origin: walks that hit v by
/// time t are continued for t further moves and their visits to v counted
/// from the hit onward; the reference side is a fresh ensemble of origin
/// walks. Needs at least `min_events` conditioning paths.
ConditionedVisitReport conditioned_visit_bound_experiment(
    Site v, uint64_t t, uint32_t replicas, uint64_t master_seed,
    uint32_t min_events = 100);

}  // namespace erw
