#pragma once

#include <vector>

#include "specdet/geometry_consts.hpp"
#include "specdet/parallel.hpp"
#include "specdet/sampling.hpp"

namespace specdet {

// Point on M_N = U(2N)/U(N)xU(N) in the stereographic coordinate
// Z = g_12 g_22^{-1} of a Haar g in U(2N); distributed per the invariant
// measure (up to total mass).
inline Matrix sample_invariant(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_invariant: n >= 1 required");
  for (int attempt = 0; attempt < 10; ++attempt) {
    UnitaryMatrix g = haar_sample(2 * n, rng);
    Matrix g12 = g.matrix().topRightCorner(n, n);
    Matrix g22 = g.matrix().bottomRightCorner(n, n);
    Eigen::JacobiSVD<Matrix> svd(g22);
    if (svd.singularValues()(n - 1) < 1e-10) continue;
    return g12 * g22.inverse();
  }
  throw std::runtime_error("sample_invariant: repeated singular g_22 blocks");
}

// Effective action S = -Tr{log(1 + gamma Z^dag U Z U^{-1}) - log(1 + Z Z^dag)}
// + (N/2) log gamma. e^{-S} reproduces gamma^{-N/2} times the coherent-state
// integrand regardless of per-eigenvalue branch choices.
inline cplx effective_action(const UnitaryMatrix& u, cplx gamma, const Matrix& z) {
  const int n = u.dim();
  if (z.rows() != n || z.cols() != n)
    throw std::invalid_argument("effective_action: Z must be N x N");
  auto tr_log = [](const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    cplx s = 0.0;
    for (int j = 0; j < m.rows(); ++j) {
      cplx lam = es.eigenvalues()(j);
      if (std::abs(lam) < 1e-14)
        throw std::runtime_error("effective_action: singular determinant argument");
      s += std::log(lam);
    }
    return s;
  };
  Matrix a = Matrix::Identity(n, n) +
             gamma * z.adjoint() * u.matrix() * z * u.matrix().adjoint();
  Matrix b = Matrix::Identity(n, n) + z * z.adjoint();
  return -(tr_log(a) - tr_log(b)) + 0.5 * n * std::log(gamma);
}

// Monte Carlo estimate of Omega from the coherent-state integral:
//   Omega = gamma^{-N/2} int dmu_N Det(1 + gamma Z^dag U Z U^{-1}) / Det(1 + Z^dag Z),
// estimate = total_mass * mean over invariant-measure samples.
inline std::pair<cplx, double> mc_omega(const UnitaryMatrix& u, cplx gamma, int samples,
                                        RngStream& rng, int threads = 1) {
  const int n = u.dim();
  if (n > 3) throw std::invalid_argument("mc_omega: n <= 3 (variance policy)");
  const cplx pref = std::exp(-0.5 * n * std::log(gamma));
  struct Block {
    KahanSum<cplx> sum;
    KahanSum<double> sum2;
  };
  auto blocks = parallel_blocks<Block>(
      static_cast<std::size_t>(samples), threads, [&](std::size_t lo, std::size_t hi, Block& b) {
        for (std::size_t s = lo; s < hi; ++s) {
          RngStream sub = rng.substream(s);
          Matrix z = sample_invariant(n, sub);
          Matrix num = Matrix::Identity(n, n) +
                       gamma * z.adjoint() * u.matrix() * z * u.matrix().adjoint();
          Matrix den = Matrix::Identity(n, n) + z.adjoint() * z;
          cplx f = pref * num.determinant() / den.determinant();
          b.sum.add(f);
          b.sum2.add(std::norm(f));
        }
      });
  KahanSum<cplx> sum;
  KahanSum<double> sum2;
  for (auto& b : blocks) {
    sum.add(b.sum.value());
    sum2.add(b.sum2.value());
  }
  const double mass = total_mass(n);
  cplx mean = sum.value() / static_cast<double>(samples);
  double var = std::max(0.0, sum2.value() / samples - std::norm(mean));
  return {mass * mean, mass * std::sqrt(var / samples)};
}

// Vol M_(p,r) = I(p, N-p) I(r, p-r) I(r, N-p-r); zero-dimensional manifolds
// report 1 (counting measure).
inline double vol_submanifold(int n, int p, int r) {
  if (p < 0 || p > n || r < 0 || r > std::min(p, n - p))
    throw std::invalid_argument("vol_submanifold: need 0 <= p <= N, 0 <= r <= min(p, N-p)");
  return std::exp(log_hua_i(p, n - p) + log_hua_i(r, p - r) + log_hua_i(r, n - p - r));
}

struct ManifoldCensus {
  struct Entry {
    int p, r;
    double volume;
    double points;  // C(N,p) C(p,r) C(N-p,r)
  };
  int n = 0;
  std::vector<Entry> entries;
  double expected_count = 0;  // (N/2+1)^2 even, (N+1)(N+3)/4 odd
  double total_points = 0;    // sums to C(2N,N)

  std::size_t count() const { return entries.size(); }
};

inline ManifoldCensus manifold_census(int n) {
  if (n < 1) throw std::invalid_argument("manifold_census: n >= 1 required");
  ManifoldCensus c;
  c.n = n;
  c.expected_count = n % 2 == 0 ? (n / 2 + 1.0) * (n / 2 + 1.0)
                                : (n + 1.0) * (n + 3.0) / 4.0;
  for (int p = 0; p <= n; ++p)
    for (int r = 0; r <= std::min(p, n - p); ++r) {
      double pts = binomial(n, p) * binomial(p, r) * binomial(n - p, r);
      c.entries.push_back({p, r, vol_submanifold(n, p, r), pts});
      c.total_points += pts;
    }
  return c;
}

// Flat-coordinate importance-sampled check of Hua's integral. Entries are
// drawn from the heavy-tailed radial density q(z) = (t/2pi)(1+|z|^2)^{-1-t/2}
// with t = 0.4; near-rank-deficient rays make the weight of any thinner
// entrywise proposal carry an infinite second moment at (2,2), while t < 1/2
// keeps E[w^2] finite so the reported standard error is meaningful.
inline std::pair<double, double> hua_i_mc(int m, int n, int samples, RngStream& rng) {
  const double t = 0.4;
  KahanSum<double> acc, acc2;
  for (int s = 0; s < samples; ++s) {
    RngStream sub = rng.substream(s);
    Matrix z(m, n);
    double logw = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double u = sub.uniform();
        while (u == 0.0) u = sub.uniform();
        double r2 = std::pow(u, -2.0 / t) - 1.0;
        z(i, j) = std::polar(std::sqrt(r2), sub.uniform(0.0, 2 * kPi));
        logw += std::log(2.0 / t) + (1.0 + t / 2.0) * std::log1p(r2);
      }
    Matrix d = Matrix::Identity(n, n) + z.adjoint() * z;
    double f = std::exp(logw - (n + m) * std::log(std::abs(d.determinant())));
    acc.add(f);
    acc2.add(f * f);
  }
  double mean = acc.value() / samples;
  double var = std::max(0.0, acc2.value() / samples - mean * mean);
  return {mean, std::sqrt(var / samples)};
}

}  // namespace specdet
