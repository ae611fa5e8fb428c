#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erw/site.hpp"
#include "erw/stats.hpp"
#include "erw/walk.hpp"

namespace erw {

/// Full description of an ensemble run. Two runs with the same config
/// produce identical statistics; the thread count only changes wall time.
struct EnsembleConfig {
  std::vector<uint64_t> horizons;  // strictly increasing step counts
  uint32_t replicas = 0;           // >= 2
  uint64_t master_seed = 0;
  WalkMode mode = WalkMode::HalfSpace;
  double drift_p = 1.0;            // only read in drift mode
  std::vector<Site> targets = {kOrigin};
  uint32_t threads = 1;

  void validate() const;
  /// Identity used to guard merges; excludes the thread count.
  uint64_t fingerprint() const;
};

/// Canonical statistic name for visits to a target ("v_x_y_z").
std::string visit_stat_name(const Site& target);

/// Per-horizon accumulators. All sums are exact integers, so merging is
/// associative and commutative and reductions are schedule-independent.
struct HorizonStats {
  std::vector<stats::IntAccumulator> visits;  // one per target
  stats::IntAccumulator distinct_sites;       // N
  stats::IntAccumulator distinct_floor;       // DF
  stats::IntAccumulator floor_hits;           // F
  stats::IntAccumulator height;               // z
  stats::IntAccumulator drift_residual5;      // 5z + 5|Vis| - F
  std::vector<uint64_t> visit_histogram;      // first target only

  void merge(const HorizonStats& other);
  friend bool operator==(const HorizonStats&, const HorizonStats&) = default;
};

class EnsembleStats {
 public:
  EnsembleStats() = default;
  explicit EnsembleStats(const EnsembleConfig& config);

  /// Folds another ensemble into this one. Throws std::invalid_argument
  /// when the configs differ (replica ranges aside).
  void merge(const EnsembleStats& other);

  const EnsembleConfig& config() const { return config_; }
  const std::vector<HorizonStats>& horizons() const { return horizons_; }
  const HorizonStats& at_horizon(size_t i) const { return horizons_.at(i); }
  uint64_t replicas_seen() const { return replicas_seen_; }

  friend bool operator==(const EnsembleStats& a, const EnsembleStats& b) {
    return a.config_.fingerprint() == b.config_.fingerprint() &&
           a.horizons_ == b.horizons_ && a.replicas_seen_ == b.replicas_seen_;
  }

  struct Row {
    uint64_t t = 0;
    std::string stat;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    uint64_t replicas = 0;
  };
  /// One row per (horizon, statistic) in fixed order.
  std::vector<Row> rows() const;

 private:
  friend EnsembleStats run_ensemble(const EnsembleConfig&);
  friend EnsembleStats run_ensemble_range(const EnsembleConfig&, uint32_t,
                                          uint32_t);

  EnsembleConfig config_;
  std::vector<HorizonStats> horizons_;
  uint64_t replicas_seen_ = 0;
};

/// Runs the configured ensemble: each replica walks once to the largest
/// horizon and is sampled at every horizon on the way (the counters are
/// prefix statistics, so one walk serves the whole schedule). Replicas are
/// distributed over threads; the reduction is an ordered fold over the
/// replica index, so results do not depend on scheduling.
EnsembleStats run_ensemble(const EnsembleConfig& config);

/// Same, over the replica subrange [first, first + count); used to test
/// that split-and-merge equals the single pass.
EnsembleStats run_ensemble_range(const EnsembleConfig& config, uint32_t first,
                                 uint32_t count);

/// Mean visits to the first target per horizon, as (t, mean, ci) rows.
struct ReturnsPoint {
  uint64_t t = 0;
  double mean = 0.0;
  stats::Interval ci;
};
std::vector<ReturnsPoint> estimate_returns(const EnsembleStats& stats);

}  // namespace erw
