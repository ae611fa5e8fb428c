#include "erw/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace erw::fit {

double log_floor(double t) {
  if (t <= 0.0) return 1.0;
  const double l = std::log(t);
  return l < 1.0 ? 1.0 : l;
}

std::string model_name(ScalingModel model) {
  switch (model) {
    case ScalingModel::SqrtLog: return "sqrt_log";
    case ScalingModel::Log: return "log";
    case ScalingModel::Constant: return "constant";
  }
  return "?";
}

double ScalingFit::rss(ScalingModel model) const {
  switch (model) {
    case ScalingModel::SqrtLog: return sqrt_log.rss;
    case ScalingModel::Log: return log.rss;
    case ScalingModel::Constant: return constant.rss;
  }
  return 0.0;
}

ScalingFit fit_scaling(std::span<const uint64_t> t,
                       std::span<const double> y) {
  if (t.size() != y.size())
    throw std::invalid_argument("fit_scaling: mismatched table");
  if (t.size() < 5)
    throw std::invalid_argument("fit_scaling: need at least 5 horizons");
  std::vector<double> x_sqrt(t.size()), x_log(t.size());
  for (size_t i = 0; i < t.size(); ++i) {
    x_log[i] = log_floor(double(t[i]));
    x_sqrt[i] = std::sqrt(x_log[i]);
  }
  ScalingFit out;
  out.sqrt_log = stats::fit_line(x_sqrt, y);
  out.log = stats::fit_line(x_log, y);
  out.constant = stats::fit_constant(y);
  out.winner = ScalingModel::SqrtLog;
  if (out.log.rss < out.rss(out.winner)) out.winner = ScalingModel::Log;
  if (out.constant.rss < out.rss(out.winner))
    out.winner = ScalingModel::Constant;
  return out;
}

TailFit tail_fit(std::span<const uint64_t> histogram, double scale,
                 double lambda_step, uint64_t min_tail) {
  if (!(scale > 0.0) || !(lambda_step > 0.0))
    throw std::invalid_argument("tail_fit: scale and step must be positive");
  TailFit out;
  uint64_t total = 0;
  for (uint64_t c : histogram) total += c;
  if (total == 0) return out;

  // tail_above[k] = #observations strictly above k
  std::vector<uint64_t> tail_above(histogram.size(), 0);
  uint64_t running = 0;
  for (size_t k = histogram.size(); k-- > 0;) {
    tail_above[k] = running;
    running += histogram[k];
  }

  std::vector<double> xs, xs2, ys;
  for (size_t step = 0;; ++step) {
    const double lambda = double(step) * lambda_step;
    const double threshold = lambda * scale;
    const auto k = uint64_t(std::floor(threshold));
    const uint64_t tail = k < histogram.size() ? tail_above[size_t(k)] : 0;
    if (tail < min_tail && step > 0) break;
    SurvivalPoint point;
    point.lambda = lambda;
    point.tail = tail;
    point.total = total;
    point.survival = double(tail) / double(total);
    point.wilson = stats::wilson_ci95(tail, total);
    out.points.push_back(point);
    if (tail >= min_tail && point.survival < 1.0) {
      xs.push_back(lambda);
      xs2.push_back(lambda * lambda);
      ys.push_back(std::log(point.survival));
    }
    if (tail == 0) break;
  }
  if (xs.size() >= 3) {
    out.lambda_fit = stats::fit_line(xs, ys);
    out.lambda2_fit = stats::fit_line(xs2, ys);
    out.usable = true;
  }
  return out;
}

}  // namespace erw::fit
