#pragma once

#include <vector>

#include "specdet/grid.hpp"
#include "specdet/spectral.hpp"

namespace specdet {

// Omega_U(gamma) = sum_{k=0}^{N} gamma^(k - N/2) |a_k|^2 (full sum, not the
// symmetrized half-sum, which would double-count k = N/2).
inline CorrelatorCurve omega_secular(const UnitaryMatrix& u, const GammaGrid& grid) {
  const int n = u.dim();
  SecularCoefficients sc = secular_coefficients(u);
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "secular";
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    KahanSum<cplx> acc;
    for (int k = 0; k <= n; ++k)
      acc.add(grid.half_power(i, n, 2L * k - n) * sc.abs2(k));
    curve.values[i] = acc.value();
  }
  return curve;
}

// Tr rho_p(U) = |a_p|^2 - |a_{p-1}|^2 for p = 0..floor(N/2); real because
// every rho_p here is self-dual.
struct CharacterTraces {
  int n = 0;
  std::vector<double> traces;

  int towers() const { return static_cast<int>(traces.size()); }
  static double dim_rho(int n, int p) {
    double b = binomial(n, p);
    double c = p >= 1 ? binomial(n, p - 1) : 0.0;
    return b * b - c * c;
  }
};

inline CharacterTraces character_traces(const UnitaryMatrix& u) {
  const int n = u.dim();
  SecularCoefficients sc = secular_coefficients(u);
  CharacterTraces ct;
  ct.n = n;
  ct.traces.resize(n / 2 + 1);
  for (int p = 0; p <= n / 2; ++p)
    ct.traces[p] = sc.abs2(p) - (p >= 1 ? sc.abs2(p - 1) : 0.0);
  return ct;
}

// sin((x/2)(1 - (2p-1)/N)) / sin(x/(2N)); at x = 0 the limit N - 2p + 1.
// Errors out on the non-removable poles x = 2 pi N k, k != 0.
inline double multiplet_factor(int n, int p, double x) {
  if (p < 0 || p > n / 2) throw std::invalid_argument("multiplet_factor: p out of range");
  if (x == 0.0) return static_cast<double>(n - 2 * p + 1);
  double k = std::round(x / (2 * kPi * n));
  if (k != 0.0 && std::abs(x - 2 * kPi * n * k) < 1e-9 * std::abs(x))
    throw std::runtime_error("multiplet_factor: grid pole at x = 2 pi N k");
  return std::sin((x / 2.0) * (1.0 - (2.0 * p - 1.0) / n)) / std::sin(x / (2.0 * n));
}

// (gamma^(p-N/2) - gamma^(N/2+1-p)) / (1-gamma) with the analytic limit
// N - 2p + 1 at gamma = 1.
inline cplx multiplet_factor_gamma(int n, int p, const GammaGrid& grid, std::size_t i) {
  if (auto x = grid.x_at(i)) return multiplet_factor(n, p, *x);
  cplx g = grid.gammas[i];
  if (std::abs(g - cplx(1.0, 0.0)) < 1e-14) return static_cast<double>(n - 2 * p + 1);
  return (grid.half_power(i, n, 2L * p - n) - grid.half_power(i, n, n + 2L - 2L * p)) / (1.0 - g);
}

// Omega as the character-tower sum, Omega = sum_p Tr rho_p(U) * multiplet.
inline CorrelatorCurve omega_character(const UnitaryMatrix& u, const GammaGrid& grid) {
  const int n = u.dim();
  CharacterTraces ct = character_traces(u);
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "character";
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    KahanSum<cplx> acc;
    for (int p = 0; p <= n / 2; ++p)
      acc.add(ct.traces[p] * multiplet_factor_gamma(n, p, grid, i));
    curve.values[i] = acc.value();
  }
  return curve;
}

}  // namespace specdet
