#include "erw/bd_chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "erw/bd_exact.hpp"

namespace erw::bd {

namespace {

using boost::multiprecision::cpp_int;

constexpr int kRationalLimit = 64;  // product form stays rational up to here

// q as an exact dyadic fraction a / 2^s (doubles are dyadic rationals).
struct Dyadic {
  cpp_int num;
  cpp_int den;
};

Dyadic to_dyadic(double q) {
  int exp = 0;
  const double fr = std::frexp(q, &exp);  // q = fr * 2^exp, fr in [0.5, 1)
  const auto mant = uint64_t(std::ldexp(fr, 53));
  Dyadic d;
  d.num = mant;
  d.den = cpp_int(1) << (53 - exp);
  return d;
}

// Integer kernel of the product formula. With q_k = a_k / b_k for interior
// states k = 2..n-1 and rho_k = (b_k - a_k) / a_k, the cumulants
//   U_1 = 1,  U_m = U_{m-1} a_m + prod_{k<=m} (b_k - a_k)
// give r_j = U_{j-1} * prod_{k=j}^{n-1} a_k / U_{n-1} with no rounding.
struct ExactKernel {
  std::vector<cpp_int> a;    // a[k-2] for state k
  std::vector<cpp_int> U;    // U[m-1] for m = 1..n-1
  std::vector<cpp_int> sfx;  // sfx[j-2] = prod_{k=j}^{n-1} a_k, j = 2..n

  explicit ExactKernel(const BDChain& chain) {
    const int n = chain.n;
    a.reserve(size_t(n) - 2);
    std::vector<cpp_int> bma;  // b_k - a_k
    bma.reserve(size_t(n) - 2);
    for (int k = 2; k <= n - 1; ++k) {
      const Dyadic d = to_dyadic(chain.up(k));
      a.push_back(d.num);
      bma.push_back(d.den - d.num);
    }
    U.resize(size_t(n) - 1);
    U[0] = 1;
    cpp_int prod_bma = 1;
    for (int m = 2; m <= n - 1; ++m) {
      prod_bma *= bma[size_t(m) - 2];
      U[size_t(m) - 1] = U[size_t(m) - 2] * a[size_t(m) - 2] + prod_bma;
    }
    sfx.resize(size_t(n) - 1);
    sfx[size_t(n) - 2] = 1;  // j = n: empty product
    for (int j = n - 1; j >= 2; --j)
      sfx[size_t(j) - 2] = a[size_t(j) - 2] * sfx[size_t(j) - 1];
  }

  Rational r(int j) const {
    if (j <= 1) return Rational(0);
    return Rational(U[size_t(j) - 2] * sfx[size_t(j) - 2], U.back());
  }
};

// Log-domain profile for long chains: log r_j via prefix log-sum-exp of the
// rho products, in long double.
std::vector<long double> log_profile(const BDChain& chain) {
  const int n = chain.n;
  std::vector<long double> logS(size_t(n) - 1);  // logS[m-1] = log S_m
  long double prefix = 0.0L;                     // log prod rho up to i
  logS[0] = 0.0L;                                // S_1 = 1
  for (int i = 2; i <= n - 1; ++i) {
    const long double q = chain.up(i);
    prefix += std::log(1.0L - q) - std::log(q);
    const long double a = logS[size_t(i) - 2];
    const long double hi = std::max(a, prefix), lo = std::min(a, prefix);
    logS[size_t(i) - 1] = hi + std::log1p(std::exp(lo - hi));
  }
  std::vector<long double> logr(size_t(n) + 1,
                                -std::numeric_limits<long double>::infinity());
  for (int j = 2; j <= n; ++j)
    logr[size_t(j)] = logS[size_t(j) - 2] - logS[size_t(n) - 2];
  return logr;  // index j; j <= 1 stays -inf
}

double checked_exp(long double x) {
  return double(std::exp(x));
}

}  // namespace

void BDChain::validate() const {
  if (n < 3) throw std::invalid_argument("BDChain: need n >= 3");
  if (int(q.size()) != n - 2)
    throw std::invalid_argument("BDChain: expected n-2 up-probabilities");
  for (double v : q)
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("BDChain: q_i outside (0,1)");
  if (start < 1 || start > n)
    throw std::invalid_argument("BDChain: start outside {1..n}");
}

Rational hit_prob_rational(const BDChain& chain, int start) {
  chain.validate();
  if (start <= 1) return Rational(0);
  if (start >= chain.n) return Rational(1);
  return ExactKernel(chain).r(start);
}

std::vector<Rational> hit_prob_profile_rational(const BDChain& chain) {
  chain.validate();
  const ExactKernel kernel(chain);
  std::vector<Rational> out(size_t(chain.n) + 1);
  out[0] = 0;
  for (int j = 1; j <= chain.n; ++j)
    out[size_t(j)] = j >= chain.n ? Rational(1) : kernel.r(j);
  return out;
}

double hit_prob_exact(const BDChain& chain) {
  chain.validate();
  if (chain.start <= 1) return 0.0;
  if (chain.start >= chain.n) return 1.0;
  if (chain.n <= kRationalLimit)
    return double(hit_prob_rational(chain, chain.start));
  return checked_exp(log_profile(chain)[size_t(chain.start)]);
}

std::vector<double> hit_prob_profile(const BDChain& chain) {
  chain.validate();
  std::vector<double> out(size_t(chain.n) + 1, 0.0);
  if (chain.n <= kRationalLimit) {
    const auto exact = hit_prob_profile_rational(chain);
    for (int j = 1; j <= chain.n; ++j) out[size_t(j)] = double(exact[size_t(j)]);
    return out;
  }
  const auto logr = log_profile(chain);
  for (int j = 2; j <= chain.n; ++j)
    out[size_t(j)] = checked_exp(logr[size_t(j)]);
  return out;
}

double hit_prob_solve(const BDChain& chain) {
  chain.validate();
  if (chain.n > 10000)
    throw std::invalid_argument("hit_prob_solve: n above 10^4");
  if (chain.start <= 1) return 0.0;
  if (chain.start >= chain.n) return 1.0;

  // Thomas elimination on the harmonicity system. After normalising row i,
  // r_i + cp[i] r_{i+1} = dp[i]; all pivots stay in (0, 1].
  const int n = chain.n;
  std::vector<long double> cp(size_t(n) + 1, 0.0L), dp(size_t(n) + 1, 0.0L);
  cp[1] = 0.0L;  // r_1 = 0
  dp[1] = 0.0L;
  for (int i = 2; i <= n - 1; ++i) {
    const long double qi = chain.up(i);
    const long double sub = -(1.0L - qi);
    const long double pivot = 1.0L - sub * cp[size_t(i) - 1];
    if (pivot == 0.0L)
      throw std::runtime_error("hit_prob_solve: singular system");
    cp[size_t(i)] = -qi / pivot;
    dp[size_t(i)] = (0.0L - sub * dp[size_t(i) - 1]) / pivot;
  }
  std::vector<long double> r(size_t(n) + 1, 0.0L);
  r[size_t(n)] = 1.0L;
  for (int i = n - 1; i >= 1; --i)
    r[size_t(i)] = dp[size_t(i)] - cp[size_t(i)] * r[size_t(i) + 1];
  return double(r[size_t(chain.start)]);
}

DominanceReport dominance_check(const BDChain& a, const BDChain& b) {
  DominanceReport report;
  a.validate();
  b.validate();
  if (a.n != b.n) {
    report.note = "state counts differ";
    return report;
  }
  if (a.start != b.start) {
    report.note = "starts differ";
    return report;
  }
  for (size_t i = 0; i < a.q.size(); ++i)
    if (a.q[i] > b.q[i]) {
      report.note = "q_A exceeds q_B at state " + std::to_string(i + 2);
      return report;
    }
  report.precondition_ok = true;
  const Rational ra = hit_prob_rational(a, a.start);
  const Rational rb = hit_prob_rational(b, b.start);
  report.holds = ra <= rb;
  report.r_a = double(ra);
  report.r_b = double(rb);
  report.margin = double(rb - ra);
  return report;
}

GrowthReport growth_ratio_check(const BDChain& chain, double qbar) {
  GrowthReport report;
  chain.validate();
  if (!(qbar > 0.0 && qbar < 0.5)) {
    report.note = "qbar outside (0, 1/2)";
    return report;
  }
  for (double v : chain.q)
    if (v > qbar) {
      report.note = "a q_i exceeds qbar";
      return report;
    }
  report.precondition_ok = true;

  const Dyadic qb = to_dyadic(qbar);
  const cpp_int alpha = qb.num, beta = qb.den;
  report.c = double(Rational(beta - 2 * alpha, beta - alpha));

  const ExactKernel kernel(chain);
  const int n = chain.n;
  report.holds = true;
  report.min_ratio = std::numeric_limits<double>::infinity();
  // j = 1 is trivial (r_1 = 0). For j >= 2 compare
  //   U_j (beta - alpha) >= U_{j-1} a_j (2 beta - 3 alpha)
  // which is r_{j+1} >= r_j (1 + c) with denominators cleared.
  for (int j = 2; j <= n - 1; ++j) {
    const cpp_int lhs = kernel.U[size_t(j) - 1] * (beta - alpha);
    const cpp_int rhs =
        kernel.U[size_t(j) - 2] * kernel.a[size_t(j) - 2] * (2 * beta - 3 * alpha);
    if (lhs < rhs) {
      report.holds = false;
      if (report.first_violation == 0) report.first_violation = j;
    }
    const double rj = double(kernel.r(j));
    const double rj1 = j + 1 >= n ? 1.0 : double(kernel.r(j + 1));
    if (rj > 0.0) report.min_ratio = std::min(report.min_ratio, rj1 / rj);
  }
  return report;
}

PerturbReport perturb_bound_report(const BDChain& chain, double p,
                                   double qbar) {
  PerturbReport report;
  chain.validate();
  if (!(p > 0.0 && p <= qbar && qbar < 0.5)) {
    report.note = "need 0 < p <= qbar < 1/2";
    return report;
  }
  for (double v : chain.q)
    if (v < p || v > qbar) {
      report.note = "a q_i escapes [p, qbar]";
      return report;
    }
  report.precondition_ok = true;

  const int n = chain.n, j = chain.start;
  long double log_r;
  if (j <= 1) {
    report.r_start = 0.0;
    report.log_r_start = -std::numeric_limits<double>::infinity();
    report.bounded = true;
    report.c_impl = 1.0;  // the bound is positive, r is zero
    return report;
  }
  if (n <= kRationalLimit) {
    const Rational r = hit_prob_rational(chain, j);
    report.r_start = double(r);
    log_r = std::log((long double)(double)r);
  } else {
    log_r = log_profile(chain)[size_t(j)];
    report.r_start = checked_exp(log_r);
  }
  report.log_r_start = double(log_r);

  const long double base = (n - j) * std::log((long double)p / (1.0L - p));
  const auto bound_log = [&](long double c) {
    long double s = std::log(c) + base;
    for (double v : chain.q) s += std::log1p(c * (long double)(v - p));
    return s;
  };

  if (bound_log(1.0L) >= log_r) {
    report.bounded = true;
    report.c_impl = 1.0;
    return report;
  }
  long double lo = 1.0L, hi = 1e6L;
  if (bound_log(hi) < log_r) {
    report.bounded = false;
    report.c_impl = double(hi);
    return report;
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-9L * lo; ++iter) {
    const long double mid = 0.5L * (lo + hi);
    (bound_log(mid) >= log_r ? hi : lo) = mid;
  }
  report.bounded = true;
  report.c_impl = double(hi);
  return report;
}

SinglePerturbReport single_site_perturb(const BDChain& chain, int site,
                                        double q_new) {
  chain.validate();
  if (site < 2 || site > chain.n - 1)
    throw std::invalid_argument("single_site_perturb: interior site expected");
  if (!(q_new > 0.0 && q_new < 1.0))
    throw std::invalid_argument("single_site_perturb: q_new outside (0,1)");
  if (q_new < chain.up(site))
    throw std::invalid_argument("single_site_perturb: q_new must not shrink");

  BDChain perturbed = chain;
  perturbed.q[size_t(site) - 2] = q_new;

  SinglePerturbReport report;
  const Rational r = hit_prob_rational(chain, chain.start);
  const Rational rp = hit_prob_rational(perturbed, perturbed.start);
  report.r = double(r);
  report.r_perturbed = double(rp);
  report.monotone = rp >= r;
  const double dq = q_new - chain.up(site);
  if (rp > r && report.r > 0.0 && dq > 0.0)
    report.c_pair = (report.r_perturbed / report.r - 1.0) / dq;
  return report;
}

BDChain random_chain(int n, double q_lo, double q_hi, RngStream& rng) {
  BDChain chain;
  chain.n = n;
  chain.q.resize(size_t(n) - 2);
  for (auto& v : chain.q) {
    do {
      v = q_lo + (q_hi - q_lo) * rng.next_unit();
    } while (!(v > 0.0 && v < 1.0));
  }
  chain.start = n <= 3 ? 2 : 2 + int(rng.below(uint32_t(n) - 2));
  return chain;
}

PerturbTrend perturb_trend_experiment(double p, double qbar, int n_lo,
                                      int n_hi, int n_step, int chains_per_n,
                                      uint64_t seed) {
  PerturbTrend trend;
  trend.all_bounded = true;
  RngStream rng(seed, 0x9d7e);
  std::vector<double> xs, ys;
  for (int n = n_lo; n <= n_hi; n += n_step) {
    double worst = 0.0;
    for (int c = 0; c < chains_per_n; ++c) {
      BDChain chain = random_chain(n, p, qbar, rng);
      chain.start = std::clamp((n + 1) / 2, 2, n - 1);
      const PerturbReport report = perturb_bound_report(chain, p, qbar);
      if (!report.precondition_ok || !report.bounded) {
        trend.all_bounded = false;
        continue;
      }
      worst = std::max(worst, report.c_impl);
    }
    trend.points.push_back({n, worst});
    xs.push_back(double(n));
    ys.push_back(worst);
  }
  if (xs.size() >= 3) trend.fit = stats::fit_line(xs, ys);
  return trend;
}

}  // namespace erw::bd
