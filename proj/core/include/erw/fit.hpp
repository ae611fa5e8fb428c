#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "erw/stats.hpp"

namespace erw::fit {

/// max(1, ln t); ln 0 counts as 1. All scaling work uses this floor.
double log_floor(double t);

enum class ScalingModel { SqrtLog, Log, Constant };

std::string model_name(ScalingModel model);

/// Least-squares comparison of mean returns against the three candidate
/// growth laws a*sqrt(log t) + b, a*log t + b, and a constant. The winner
/// is the model with the smallest residual sum of squares.
struct ScalingFit {
  stats::LineFit sqrt_log;  // y against sqrt(log t)
  stats::LineFit log;       // y against log t
  stats::LineFit constant;  // y against nothing
  ScalingModel winner = ScalingModel::Constant;

  double rss(ScalingModel model) const;
};

/// Requires at least five horizons. Throws std::invalid_argument otherwise
/// or when the design is degenerate.
ScalingFit fit_scaling(std::span<const uint64_t> t, std::span<const double> y);

struct SurvivalPoint {
  double lambda = 0.0;
  uint64_t tail = 0;   // observations strictly above lambda * scale
  uint64_t total = 0;
  double survival = 0.0;
  stats::Interval wilson;  // 95% score interval for the survival probability
};

/// Empirical tail of a nonnegative integer statistic against thresholds
/// lambda * scale, with exponential (log S vs lambda) and square-
/// exponential (log S vs lambda^2) fits side by side.
struct TailFit {
  std::vector<SurvivalPoint> points;
  stats::LineFit lambda_fit;
  stats::LineFit lambda2_fit;
  bool usable = false;  // enough populated grid points to regress
  bool lambda_slope_negative_95() const {
    return usable && lambda_fit.slope_negative_95();
  }
};

/// `histogram[k]` counts observations equal to k. Grid points keep at least
/// `min_tail` observations in the tail so the log survival stays stable.
TailFit tail_fit(std::span<const uint64_t> histogram, double scale,
                 double lambda_step = 0.25, uint64_t min_tail = 10);

}  // namespace erw::fit
