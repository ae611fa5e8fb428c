#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace erw::stats {

/// Two-sided Student-t critical value at 95% confidence for `df` degrees of
/// freedom (normal limit above the table).
double t_critical_95(uint64_t df);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double half_width() const { return (hi - lo) / 2.0; }
};

/// Streaming moments with exact integer sums; merge is associative and
/// commutative, so reductions are order-independent.
class IntAccumulator {
 public:
  void add(int64_t v) {
    ++count_;
    sum_ += v;
    sumsq_ += __int128(v) * v;
  }

  void merge(const IntAccumulator& other) {
    count_ += other.count_;
    sum_ += other.sum_;
    sumsq_ += other.sumsq_;
  }

  uint64_t count() const { return count_; }
  double mean() const;
  double variance() const;  // unbiased; 0 when count < 2
  double std_error() const;
  /// t-interval around the mean.
  Interval ci95() const;

  friend bool operator==(const IntAccumulator&, const IntAccumulator&) =
      default;

 private:
  uint64_t count_ = 0;
  __int128 sum_ = 0;
  __int128 sumsq_ = 0;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_ci95(uint64_t successes, uint64_t trials);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  uint64_t n = 0;

  Interval slope_ci95() const;
  /// True when slope is significantly below zero at 95% (one-sided check
  /// via the two-sided interval's upper edge).
  bool slope_negative_95() const { return n >= 3 && slope_ci95().hi < 0.0; }
  /// True unless the slope is significantly above zero.
  bool slope_consistent_with_nonpositive_95() const {
    return n < 3 || slope_ci95().lo <= 0.0;
  }
};

/// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares for a constant model y = c.
LineFit fit_constant(std::span<const double> y);

}  // namespace erw::stats
