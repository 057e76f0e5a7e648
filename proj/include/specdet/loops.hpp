#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "specdet/saddle.hpp"

namespace specdet {

namespace detail {

// Gaussian expectation of a product of trace words in X_M = zeta^dag (M zeta)
// under the weight e^{-Tr zeta^dag (1-T) zeta}, normalized. Each word is a
// list of superoperator labels (0 = identity, 1 = T); covariance
// C = (1-T)^{-1}, E[zeta_v conj(zeta_w)] = C_{v,w}. Wick pairings are
// enumerated exhaustively; per pairing the value is
//   sum_{i,j} prod_s A_s[(j_s, i_{succ(s)}), (j_{pi(s)}, i_{pi(s)})]
// with A_s = M_s C, succ the cyclic successor inside the word.
inline cplx wick_trace_product(const std::vector<std::vector<int>>& words,
                               const std::vector<Matrix>& a_mats, int n) {
  std::vector<int> slot_label, succ;
  for (const auto& w : words) {
    int base = static_cast<int>(slot_label.size());
    int len = static_cast<int>(w.size());
    for (int k = 0; k < len; ++k) {
      slot_label.push_back(w[k]);
      succ.push_back(base + (k + 1) % len);
    }
  }
  const int kslots = static_cast<int>(slot_label.size());

  std::vector<int> perm(kslots);
  std::iota(perm.begin(), perm.end(), 0);

  long idx_count = 1;
  for (int s = 0; s < 2 * kslots; ++s) idx_count *= n;

  cplx total = 0.0;
  std::vector<int> iv(kslots), jv(kslots);
  do {
    cplx val = 0.0;
    for (long code = 0; code < idx_count; ++code) {
      long c = code;
      for (int s = 0; s < kslots; ++s) { iv[s] = c % n; c /= n; }
      for (int s = 0; s < kslots; ++s) { jv[s] = c % n; c /= n; }
      cplx prod = 1.0;
      for (int s = 0; s < kslots; ++s) {
        const Matrix& a = a_mats[slot_label[s]];
        prod *= a(jv[s] * n + iv[succ[s]], jv[perm[s]] * n + iv[perm[s]]);
        if (prod == cplx(0.0, 0.0)) break;
      }
      val += prod;
    }
    total += val;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace detail

// Loop corrections around Z = 0 for quadratic weight 1 - T, T = gamma <Ad U>.
// Returns Det(1-T)^{-1} * E[f_order]; the one-loop expectation is the
// T-independent constant -N^3, the two-loop one N^6/2 + 7N^4/12 - N^2/12.
inline cplx loop_corrections(const Matrix& t, int order) {
  const int n = adjoint_side(t);
  if (n > 3) throw std::invalid_argument("loop_corrections: n <= 3 (Wick enumeration cost)");
  if (order != 1 && order != 2) throw std::invalid_argument("loop_corrections: order must be 1 or 2");

  Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(t.rows(), t.rows()) - t);
  cplx det = lu.determinant();
  if (!std::isfinite(std::abs(det)) || std::abs(det) < 1e-250)
    throw std::runtime_error("loop_corrections: 1 - T is singular");
  Matrix c = lu.solve(Matrix::Identity(t.rows(), t.rows()));
  std::vector<Matrix> a_mats{c, t * c};

  auto ew = [&](std::vector<std::vector<int>> words) {
    return detail::wick_trace_product(words, a_mats, n);
  };
  const double nn = n;

  cplx e;
  if (order == 1) {
    // f1 = 1/2 Tr X_I^2 - 1/2 Tr X_T^2 - 2N Tr X_I
    e = 0.5 * ew({{0, 0}}) - 0.5 * ew({{1, 1}}) - 2.0 * nn * ew({{0}});
  } else {
    // f2 = -1/3 Tr X_I^3 + 1/3 Tr X_T^3 + 1/8 [Tr X_I^2 - Tr X_T^2]^2
    //      + 2N^2 (Tr X_I)^2 + N Tr X_I^2 - N Tr X_I (Tr X_I^2 - Tr X_T^2)
    e = (-1.0 / 3.0) * ew({{0, 0, 0}}) + (1.0 / 3.0) * ew({{1, 1, 1}}) +
        0.125 * ew({{0, 0}, {0, 0}}) - 0.25 * ew({{0, 0}, {1, 1}}) +
        0.125 * ew({{1, 1}, {1, 1}}) + 2.0 * nn * nn * ew({{0}, {0}}) +
        nn * ew({{0, 0}}) - nn * (ew({{0}, {0, 0}}) - ew({{0}, {1, 1}}));
  }
  return e / det;
}

// Naive Monte Carlo check of the same Gaussian integrals (test oracle); only
// sensible at n = 1 where the covariance is a scalar. Returns the normalized
// expectation E[f_order] and its standard error.
inline std::pair<double, double> loop_corrections_mc(double t_scalar, int order, int samples,
                                                     RngStream& rng) {
  if (std::abs(t_scalar) >= 1.0)
    throw std::invalid_argument("loop_corrections_mc: need |T| < 1");
  double c = 1.0 / (1.0 - t_scalar);
  KahanSum<double> acc, acc2;
  for (int s = 0; s < samples; ++s) {
    double re = rng.normal() * std::sqrt(c / 2);
    double im = rng.normal() * std::sqrt(c / 2);
    double r2 = re * re + im * im;  // |zeta|^2 with E = c
    double f;
    if (order == 1) {
      f = 0.5 * r2 * r2 - 0.5 * t_scalar * t_scalar * r2 * r2 - 2.0 * r2;
    } else {
      double a = (1.0 - t_scalar * t_scalar) * r2 * r2;
      f = (-1.0 / 3.0) * (1.0 - t_scalar * t_scalar * t_scalar) * r2 * r2 * r2 +
          0.125 * a * a + 2.0 * r2 * r2 + r2 * r2 - r2 * a;
    }
    acc.add(f);
    acc2.add(f * f);
  }
  double mean = acc.value() / samples;
  double var = std::max(0.0, acc2.value() / samples - mean * mean);
  return {mean, std::sqrt(var / samples)};
}

}  // namespace specdet
