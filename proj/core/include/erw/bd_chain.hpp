#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erw/rng.hpp"
#include "erw/stats.hpp"

namespace erw::bd {

/// Nearest-neighbour chain on {1..n} with absorbing endpoints. q holds the
/// up-probabilities of the interior states 2..n-1 (q[i-2] belongs to state
/// i). The quantity of interest is the probability of hitting n before 1.
struct BDChain {
  int n = 0;
  std::vector<double> q;
  int start = 1;

  double up(int state) const { return q[size_t(state) - 2]; }
  /// Throws std::invalid_argument on malformed chains (n < 3, wrong q
  /// length, q_i outside (0,1), start outside {1..n}).
  void validate() const;
};

/// Exact hitting probability of n before 1, by the gambler's-ruin product
/// form. Rational arithmetic up to n = 64; log-domain long-double sums
/// above, so long chains neither overflow nor lose the tiny probabilities.
double hit_prob_exact(const BDChain& chain);

/// The same probability from the harmonicity system
/// r_i = q_i r_{i+1} + (1-q_i) r_{i-1}, solved by tridiagonal elimination.
/// Independent implementation used as a cross-check oracle.
double hit_prob_solve(const BDChain& chain);

/// hit_prob_exact for every start 1..n.
std::vector<double> hit_prob_profile(const BDChain& chain);

struct DominanceReport {
  bool precondition_ok = false;
  std::string note;
  bool holds = false;   // r_A <= r_B, decided in exact arithmetic
  double r_a = 0.0;
  double r_b = 0.0;
  double margin = 0.0;  // r_b - r_a
};

/// Chains with elementwise-dominated up-probabilities have ordered hitting
/// probabilities. Requires equal n and start and q_A <= q_B elementwise.
DominanceReport dominance_check(const BDChain& a, const BDChain& b);

struct GrowthReport {
  bool precondition_ok = false;
  std::string note;
  bool holds = false;      // r_{j+1} >= r_j * (1 + c) for all interior j
  double c = 0.0;          // (1 - 2*qbar) / (1 - qbar)
  int first_violation = 0; // j of the first failure, 0 when none
  double min_ratio = 0.0;  // min over j with r_j > 0 of r_{j+1}/r_j
};

/// Checks the geometric growth of the hitting probabilities when all
/// up-probabilities are at most qbar < 1/2. Decided in exact arithmetic.
GrowthReport growth_ratio_check(const BDChain& chain, double qbar);

struct PerturbReport {
  bool precondition_ok = false;
  std::string note;
  bool bounded = false;   // a C in [1, 1e6] makes the bound hold
  double c_impl = 0.0;    // smallest such C (bisection to 1e-9)
  double r_start = 0.0;
  double log_r_start = 0.0;
};

/// Measures the implied constant in
///   r_j <= C (p/(1-p))^(n-j) prod_i (1 + C (q_i - p))
/// for a chain with p <= q_i <= qbar < 1/2 started at j.
PerturbReport perturb_bound_report(const BDChain& chain, double p,
                                   double qbar);

struct SinglePerturbReport {
  double r = 0.0;
  double r_perturbed = 0.0;
  bool monotone = false;  // r_perturbed >= r, decided exactly
  /// Implied constant of r' <= r (1 + C (q'_I - q_I)); 0 when r' <= r.
  double c_pair = 0.0;
};

/// Effect of raising a single up-probability q_I to q_new.
SinglePerturbReport single_site_perturb(const BDChain& chain, int site,
                                        double q_new);

struct TrendPoint {
  int n = 0;
  double c_impl_max = 0.0;  // largest implied constant seen at this n
};

struct PerturbTrend {
  std::vector<TrendPoint> points;
  stats::LineFit fit;  // c_impl_max against n
  bool all_bounded = false;
};

/// Sweeps random chains with q_i uniform on [p, qbar], start mid-chain,
/// over n in {n_lo, n_lo+n_step, ..., <= n_hi}; fits the per-n maximum
/// implied constant against n. A slope significantly above zero would mean
/// the constant secretly depends on n.
PerturbTrend perturb_trend_experiment(double p, double qbar, int n_lo,
                                      int n_hi, int n_step, int chains_per_n,
                                      uint64_t seed);

/// Uniform random chain: q_i iid on [q_lo, q_hi], start uniform in 2..n-1.
BDChain random_chain(int n, double q_lo, double q_hi, RngStream& rng);

}  // namespace erw::bd
