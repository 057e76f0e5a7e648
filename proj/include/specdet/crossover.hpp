#pragma once

#include <optional>
#include <vector>

#include "specdet/correlator.hpp"

namespace specdet {

// f(y) = -y log y - (1-y) log(1-y), endpoints by limit.
inline double f_entropy(double y) {
  if (y < 0.0 || y > 1.0) throw std::invalid_argument("f_entropy: y must lie in [0,1]");
  if (y == 0.0 || y == 1.0) return 0.0;
  return -y * std::log(y) - (1.0 - y) * std::log(1.0 - y);
}

inline double f_eps(double y, double eps) { return f_entropy(y) - 2.0 * eps * y * (1.0 - y); }

inline double f_eps_second(double y, double eps) { return -1.0 / (y * (1.0 - y)) + 4.0 * eps; }

// Interior maximum of f_eps on (0, 1/2): bisection on
// log((1-y)/y) = 2 eps (1 - 2y). Only exists for eps > 1.
inline double solve_y_eps(double eps) {
  if (eps <= 1.0) throw std::invalid_argument("solve_y_eps: no interior maximum; subcritical");
  auto g = [eps](double y) { return std::log((1.0 - y) / y) - 2.0 * eps * (1.0 - 2.0 * y); };
  double lo = 1e-300, hi = 0.5 - 1e-13;
  if (!(g(lo) > 0.0) || !(g(hi) < 0.0))
    throw std::runtime_error("solve_y_eps: bracketing failed");
  for (int it = 0; it < 200 && hi - lo > 1e-16 * lo; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct CrossoverPoint {
  int n = 0;
  double eps = 0.0;
  enum class Regime { subcritical, critical, supercritical } regime;
  std::optional<double> y_eps;
};

inline CrossoverPoint classify_crossover(int n, double eps) {
  CrossoverPoint c;
  c.n = n;
  c.eps = eps;
  if (std::abs(eps - 1.0) <= 1e-12) {
    c.regime = CrossoverPoint::Regime::critical;
  } else if (eps < 1.0) {
    c.regime = CrossoverPoint::Regime::subcritical;
  } else {
    c.regime = CrossoverPoint::Regime::supercritical;
    c.y_eps = solve_y_eps(eps);
  }
  return c;
}

// Poisson-averaged character traces <Tr rho_p> = C(N,p) - C(N,p-1)
// (Catalan-triangle numbers), in log space.
inline std::vector<double> poisson_log_traces(int n) {
  std::vector<double> out(n / 2 + 1);
  for (int p = 0; p <= n / 2; ++p) {
    if (p == 0)
      out[p] = 0.0;
    else
      out[p] = log_binomial(n, p) + std::log(n - 2.0 * p + 1.0) - std::log(n - p + 1.0);
  }
  return out;
}

inline std::vector<double> poisson_traces(int n) {
  auto lt = poisson_log_traces(n);
  std::vector<double> out(lt.size());
  for (std::size_t p = 0; p < lt.size(); ++p) out[p] = std::exp(lt[p]);
  return out;
}

// Finite-N transitional correlator: Poisson traces with Casimir damping.
// eps is the rescaled crossover parameter (= N * kernel time); summation in
// log space with max-shift so it stays usable out to N ~ 10^4 whenever the
// final value itself fits in double range.
inline CorrelatorCurve crossover_exact(int n, double eps, const std::vector<double>& xs) {
  if (n < 1 || n > 10000) throw std::invalid_argument("crossover_exact: 1 <= n <= 10^4");
  if (eps < 0) throw std::invalid_argument("crossover_exact: eps >= 0 required");
  auto lt = poisson_log_traces(n);
  std::vector<double> lw(lt.size());
  double shift = -1e308;
  for (int p = 0; p <= n / 2; ++p) {
    lw[p] = lt[p] - 2.0 * (eps / n) * p * (n + 1.0 - p);
    shift = std::max(shift, lw[p]);
  }
  CorrelatorCurve curve;
  curve.grid = GammaGrid::from_x(xs);
  curve.route = "crossover-exact";
  curve.scheme = "poisson,eps=" + std::to_string(eps);
  curve.values.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    KahanSum<double> acc;
    for (int p = 0; p <= n / 2; ++p)
      acc.add(std::exp(lw[p] - shift) * multiplet_factor(n, p, xs[i]));
    curve.values[i] = std::exp(shift) * acc.value();
  }
  return curve;
}

// Large-N Laplace evaluation of the same sum.
//  subcritical (eps < 1): boundary maximum at y = 1/2,
//      2^N e^{-N eps/2} (1-eps)^{-3/2} e^{-eps};
//    the trailing e^{-eps} is the damping remainder 2 eps y at y = 1/2 that
//    the exponent N f_eps(y) does not carry; without it the exact/asymptotic
//    ratio converges to e^{-eps}, not 1.
//  supercritical (eps > 1): interior maximum at y_eps,
//      2N/sqrt(|f_eps''|) * (1-2y)/((1-y) sqrt(y(1-y))) e^{-2 eps y}
//        * e^{N f_eps(y)} * sin(x(1/2-y))/x;
//    (1-2y)/(1-y) is the exact p -> p-1 binomial ratio; the commonly quoted
//    derivative form f'(y) only matches it near y = 1/2.
//  critical (eps = 1): no closed form implemented.
inline CorrelatorCurve asymptotic_correlator(int n, double eps, const std::vector<double>& xs) {
  CrossoverPoint cp = classify_crossover(n, eps);
  if (cp.regime == CrossoverPoint::Regime::critical)
    throw std::invalid_argument("critical regime: no closed form implemented");
  CorrelatorCurve curve;
  curve.grid = GammaGrid::from_x(xs);
  curve.route = "crossover-asymptotic";
  curve.scheme = "poisson,eps=" + std::to_string(eps);
  curve.values.resize(xs.size());
  if (cp.regime == CrossoverPoint::Regime::subcritical) {
    double v = std::exp(n * std::log(2.0) - n * eps / 2.0 - eps) * std::pow(1.0 - eps, -1.5);
    for (std::size_t i = 0; i < xs.size(); ++i) curve.values[i] = v;
    return curve;
  }
  double y = *cp.y_eps;
  double pref = 2.0 * n / std::sqrt(std::abs(f_eps_second(y, eps))) *
                ((1.0 - 2.0 * y) / (1.0 - y)) / std::sqrt(y * (1.0 - y)) *
                std::exp(n * f_eps(y, eps) - 2.0 * eps * y);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double x = xs[i];
    double osc = x == 0.0 ? (0.5 - y) : std::sin(x * (0.5 - y)) / x;
    curve.values[i] = pref * osc;
  }
  return curve;
}

}  // namespace specdet
