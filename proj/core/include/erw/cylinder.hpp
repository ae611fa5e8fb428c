#pragma once

#include <cstdint>
#include <vector>

#include "erw/fit.hpp"
#include "erw/site.hpp"

namespace erw {

/// Streaming count of excursions into the vertical cylinder of radius r
/// around the origin column. An entry is a time inside the radius-r
/// cylinder; the excursion ends on leaving the radius-2r cylinder. The
/// convention starts the clock outside at time 1: positions at times
/// 1..t-1 feed the counter, an entry at time t or later does not count.
class CylinderVisitCounter {
 public:
  explicit CylinderVisitCounter(int32_t r)
      : r2_in_(int64_t(r) * r), r2_out_(4 * int64_t(r) * r) {}

  void observe(const Site& s) {
    const int64_t d2 = int64_t(s.x) * s.x + int64_t(s.y) * s.y;
    if (seeking_entry_) {
      if (d2 <= r2_in_) {
        ++count_;
        seeking_entry_ = false;
      }
    } else if (d2 > r2_out_) {
      seeking_entry_ = true;
    }
  }

  uint64_t count() const { return count_; }

 private:
  int64_t r2_in_;
  int64_t r2_out_;
  bool seeking_entry_ = true;
  uint64_t count_ = 0;
};

struct CylinderExperiment {
  uint64_t t = 0;
  int32_t radius = 0;
  uint32_t replicas = 0;
  std::vector<uint64_t> histogram;  // histogram[k] = #replicas with l == k
  fit::TailFit tail;                // survival of l against lambda * log t
};

/// Ensemble distribution of the cylinder visit count for origin-started
/// walks of t steps, with the exponential-decay fit of
/// P(l > lambda log t) in lambda.
CylinderExperiment run_cylinder_experiment(uint64_t t, int32_t radius,
                                           uint32_t replicas,
                                           uint64_t master_seed,
                                           uint32_t threads = 1);

}  // namespace erw
