#include "erw/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace erw::stats {

namespace {

// Two-sided 95% t critical values for df = 1..30.
constexpr double kT95[30] = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

double int128_to_double(__int128 v) {
  if (v >= 0) {
    return double(uint64_t(v >> 64)) * 0x1p64 + double(uint64_t(v));
  }
  const __int128 a = -v;
  return -(double(uint64_t(a >> 64)) * 0x1p64 + double(uint64_t(a)));
}

}  // namespace

double t_critical_95(uint64_t df) {
  if (df == 0) return std::numeric_limits<double>::infinity();
  if (df <= 30) return kT95[df - 1];
  // Cornish-Fisher style expansion around the normal quantile.
  const double z = 1.959963984540054;
  const double d = double(df);
  return z + (z * z * z + z) / (4.0 * d) +
         (5.0 * z * z * z * z * z + 16.0 * z * z * z + 3.0 * z) /
             (96.0 * d * d);
}

double IntAccumulator::mean() const {
  if (count_ == 0) return 0.0;
  return int128_to_double(sum_) / double(count_);
}

double IntAccumulator::variance() const {
  if (count_ < 2) return 0.0;
  const double n = double(count_);
  const double m = mean();
  const double msq = int128_to_double(sumsq_) / n;
  const double var = (msq - m * m) * n / (n - 1.0);
  return var > 0.0 ? var : 0.0;
}

double IntAccumulator::std_error() const {
  if (count_ == 0) return 0.0;
  return std::sqrt(variance() / double(count_));
}

Interval IntAccumulator::ci95() const {
  const double m = mean();
  if (count_ < 2) return {m, m};
  const double h = t_critical_95(count_ - 1) * std_error();
  return {m - h, m + h};
}

Interval wilson_ci95(uint64_t successes, uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {centre - half, centre + half};
}

Interval LineFit::slope_ci95() const {
  if (n < 3) return {-std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
  const double h = t_critical_95(n - 2) * slope_se;
  return {slope - h, slope + h};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 paired points");
  const double n = double(x.size());
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate design");
  LineFit fit;
  fit.n = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.rss = syy - fit.slope * sxy;
  if (fit.rss < 0.0) fit.rss = 0.0;
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - fit.rss / syy;
  fit.slope_se =
      x.size() > 2 ? std::sqrt(fit.rss / (n - 2.0) / sxx) : 0.0;
  return fit;
}

LineFit fit_constant(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("fit_constant: empty sample");
  double sy = 0.0;
  for (double v : y) sy += v;
  const double my = sy / double(y.size());
  double rss = 0.0;
  for (double v : y) rss += (v - my) * (v - my);
  LineFit fit;
  fit.n = y.size();
  fit.slope = 0.0;
  fit.intercept = my;
  fit.rss = rss;
  fit.r2 = 0.0;
  fit.slope_se = 0.0;
  return fit;
}

}  // namespace erw::stats
