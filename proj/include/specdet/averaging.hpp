#pragma once

#include <string>
#include <vector>

#include "specdet/correlator.hpp"
#include "specdet/parallel.hpp"
#include "specdet/sampling.hpp"
#include "specdet/saddle.hpp"

namespace specdet {

struct AveragedAdjoint {
  Matrix m;
  std::string scheme;
  double mc_stderr = -1.0;  // < 0: exact (no sampling)
};

inline Matrix uniform_mode_projector(int n) {
  // |I><I| / N in the entrywise basis
  Matrix p = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) p(i * n + i, k * n + k) = 1.0 / n;
  return p;
}

// alpha = (|Tr U|^2 - 1) / N
inline double alpha(const UnitaryMatrix& u) {
  return (std::norm(u.matrix().trace()) - 1.0) / u.dim();
}

// Eigenbasis (V) average of Ad U over Haar conjugations, closed form:
//   <Ad U>_V = P_I + (1 - P_I) (|Tr U|^2 - 1)/(N^2 - 1).
inline AveragedAdjoint v_average_adjoint(const UnitaryMatrix& u) {
  const int n = u.dim();
  if (n < 2) throw std::invalid_argument("v_average_adjoint: undefined at N = 1");
  double lam = (std::norm(u.matrix().trace()) - 1.0) / (n * n - 1.0);
  Matrix p = uniform_mode_projector(n);
  AveragedAdjoint a;
  a.scheme = "basis";
  a.m = p + lam * (Matrix::Identity(n * n, n * n) - p);
  return a;
}

// Monte Carlo version of the same average (test oracle for the closed form).
// Returns the sample mean of Ad(V U V^{-1}) and the largest entrywise
// standard error.
inline AveragedAdjoint v_average_adjoint_mc(const UnitaryMatrix& u, int samples, RngStream& rng) {
  const int n = u.dim();
  Matrix sum = Matrix::Zero(n * n, n * n);
  Eigen::MatrixXd sum2re = Eigen::MatrixXd::Zero(n * n, n * n);
  Eigen::MatrixXd sum2im = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int s = 0; s < samples; ++s) {
    RngStream sub = rng.substream(s);
    UnitaryMatrix v = haar_sample(n, sub);
    Matrix rotated = v.matrix() * u.matrix() * v.matrix().adjoint();
    Matrix ad = adjoint_operator(UnitaryMatrix(rotated, 1e-8));
    sum += ad;
    sum2re += ad.real().cwiseAbs2().matrix();
    sum2im += ad.imag().cwiseAbs2().matrix();
  }
  AveragedAdjoint a;
  a.scheme = "basis-mc";
  a.m = sum / samples;
  double maxerr = 0.0;
  for (int i = 0; i < n * n; ++i)
    for (int j = 0; j < n * n; ++j) {
      double vr = sum2re(i, j) / samples - a.m(i, j).real() * a.m(i, j).real();
      double vi = sum2im(i, j) / samples - a.m(i, j).imag() * a.m(i, j).imag();
      maxerr = std::max(maxerr, std::sqrt(std::max(0.0, vr + vi) / samples));
    }
  a.mc_stderr = maxerr;
  return a;
}

// Leading-order saddle pair for the V-averaged action (the closed asymptotic
// form): 2 N C_N / (1 - alpha/N)^{N^2} * sin(x(1/2 - alpha))/x.
inline double v_saddle_correlator(int n, double alpha_val, double x, bool include_cn = false) {
  if (alpha_val >= n) throw std::invalid_argument("v_saddle_correlator: alpha >= N");
  double pref = 2.0 * n / std::pow(1.0 - alpha_val / n, n * n);
  double osc = x == 0.0 ? (0.5 - alpha_val) : std::sin(x * (0.5 - alpha_val)) / x;
  double val = pref * osc;
  return include_cn ? val * normalization_cn(n) : val;
}

inline double v_saddle_correlator(const UnitaryMatrix& u, double x, bool include_cn = false) {
  return v_saddle_correlator(u.dim(), alpha(u), x, include_cn);
}

// Same saddle pair evaluated exactly from the two-eigenvalue spectrum of
// <Ad U>_V; identical to averaged_standard_saddles(v_average_adjoint(U), x)
// without forming the N^2 x N^2 matrix.
inline double v_saddle_correlator_exact(int n, double alpha_val, double x,
                                        bool include_cn = false) {
  if (n < 2) throw std::invalid_argument("v_saddle_correlator_exact: N >= 2");
  double lam = alpha_val * n / (n * n - 1.0);
  cplx g = std::polar(1.0, x / n);
  cplx det = (1.0 - g) * std::pow(1.0 - g * lam, n * n - 1);
  if (std::abs(det) < 1e-300)
    throw std::runtime_error("v_saddle_correlator_exact: degenerate determinant");
  double val = 2.0 * std::real(std::polar(1.0, -x / 2.0) / det);
  return include_cn ? val * normalization_cn(n) : val;
}

// Heat-kernel (isotropic) average: multiply Tr rho_p by the Casimir damping
// e^{-2 eps p (N+1-p)}. eps is the paper's kernel time; reports elsewhere use
// the rescaled Neps.
inline CorrelatorCurve isotropic_correlator(const UnitaryMatrix& u, double kernel_time,
                                            const GammaGrid& grid) {
  if (kernel_time < 0) throw std::invalid_argument("isotropic_correlator: eps >= 0 required");
  const int n = u.dim();
  CharacterTraces ct = character_traces(u);
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "character";
  curve.scheme = "isotropic eps=" + std::to_string(kernel_time);
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    KahanSum<cplx> acc;
    for (int p = 0; p <= n / 2; ++p) {
      double damp = std::exp(-2.0 * kernel_time * p * (n + 1.0 - p));
      acc.add(damp * ct.traces[p] * multiplet_factor_gamma(n, p, grid, i));
    }
    curve.values[i] = acc.value();
  }
  return curve;
}

// Heat-kernel averaged adjoint. mode_damping is the per-mode exponent
// (= N * kernel_time): <Ad U> = P_I + e^{-2 mode_damping} (Ad U)(1 - P_I).
inline AveragedAdjoint isotropic_adjoint(const UnitaryMatrix& u, double mode_damping) {
  if (mode_damping < 0) throw std::invalid_argument("isotropic_adjoint: eps >= 0 required");
  const int n = u.dim();
  Matrix p = uniform_mode_projector(n);
  Matrix ad = adjoint_operator(u);
  AveragedAdjoint a;
  a.scheme = "isotropic";
  a.m = p + std::exp(-2.0 * mode_damping) * (ad - ad * p);
  return a;
}

// Semiclassical average: Monte Carlo mean of Ad(e^{-i sum_j t_j H_j} U), with
// t_j centered Gaussians of the stated width (density propto e^{-t^2/w^2},
// i.e. sd = w / sqrt 2). Generators are passed as H/hbar.
inline AveragedAdjoint semiclassical_adjoint(const UnitaryMatrix& u,
                                             const std::vector<Matrix>& generators,
                                             double width, int samples, RngStream& rng) {
  const int n = u.dim();
  if (width <= 0) throw std::invalid_argument("semiclassical_adjoint: width > 0 required");
  for (const auto& h : generators) {
    if (h.rows() != n || h.cols() != n)
      throw std::invalid_argument("semiclassical_adjoint: generator dimension mismatch");
    if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("semiclassical_adjoint: generator not Hermitian");
  }
  const double sd = width / std::sqrt(2.0);
  Matrix sum = Matrix::Zero(n * n, n * n);
  Eigen::MatrixXd sum2re = Eigen::MatrixXd::Zero(n * n, n * n);
  Eigen::MatrixXd sum2im = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int s = 0; s < samples; ++s) {
    RngStream sub = rng.substream(s);
    Matrix h = Matrix::Zero(n, n);
    for (const auto& gen : generators) h += sub.normal() * sd * gen;
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector ph(n);
    for (int j = 0; j < n; ++j) ph(j) = std::polar(1.0, -es.eigenvalues()(j));
    Matrix kick = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    Matrix m = kick * u.matrix();
    Matrix ad = adjoint_operator(UnitaryMatrix(m, 1e-7));
    sum += ad;
    sum2re += ad.real().cwiseAbs2().matrix();
    sum2im += ad.imag().cwiseAbs2().matrix();
  }
  AveragedAdjoint a;
  a.scheme = "semiclassical";
  a.m = sum / samples;
  double maxerr = 0.0;
  for (int i = 0; i < n * n; ++i)
    for (int j = 0; j < n * n; ++j) {
      double vr = sum2re(i, j) / samples - a.m(i, j).real() * a.m(i, j).real();
      double vi = sum2im(i, j) / samples - a.m(i, j).imag() * a.m(i, j).imag();
      maxerr = std::max(maxerr, std::sqrt(std::max(0.0, vr + vi) / samples));
    }
  a.mc_stderr = maxerr;
  return a;
}

enum class Ensemble { poisson, cue };

// Analytic ensemble curve from the exact variances <|a_k|^2>:
// C(N,k) for Poisson, 1 for CUE.
inline CorrelatorCurve ensemble_correlator_analytic(Ensemble kind, int n, const GammaGrid& grid) {
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "secular";
  curve.scheme = kind == Ensemble::poisson ? "poisson-analytic" : "cue-analytic";
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    KahanSum<cplx> acc;
    for (int k = 0; k <= n; ++k) {
      double var = kind == Ensemble::poisson ? binomial(n, k) : 1.0;
      acc.add(var * grid.half_power(i, n, 2L * k - n));
    }
    curve.values[i] = acc.value();
  }
  return curve;
}

// Monte Carlo ensemble curve: omega_secular averaged over sampled matrices,
// with per-point standard errors.
inline CorrelatorCurve ensemble_correlator_mc(Ensemble kind, int n, const GammaGrid& grid,
                                              int samples, RngStream& rng, int threads = 1) {
  struct Block {
    std::vector<cplx> sum;
    std::vector<double> sum2;
  };
  auto blocks = parallel_blocks<Block>(
      static_cast<std::size_t>(samples), threads, [&](std::size_t lo, std::size_t hi, Block& b) {
        b.sum.assign(grid.size(), 0.0);
        b.sum2.assign(grid.size(), 0.0);
        for (std::size_t s = lo; s < hi; ++s) {
          RngStream sub = rng.substream(s);
          UnitaryMatrix u = kind == Ensemble::poisson ? poisson_sample(n, sub)
                                                      : haar_sample(n, sub);
          CorrelatorCurve one = omega_secular(u, grid);
          for (std::size_t i = 0; i < grid.size(); ++i) {
            b.sum[i] += one.values[i];
            b.sum2[i] += std::norm(one.values[i]);
          }
        }
      });
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "mc";
  curve.scheme = kind == Ensemble::poisson ? "poisson-mc" : "cue-mc";
  curve.values.assign(grid.size(), 0.0);
  curve.stderrs.assign(grid.size(), 0.0);
  std::vector<double> sum2(grid.size(), 0.0);
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      curve.values[i] += b.sum[i];
      sum2[i] += b.sum2[i];
    }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    curve.values[i] /= static_cast<double>(samples);
    double var = std::max(0.0, sum2[i] / samples - std::norm(curve.values[i]));
    curve.stderrs[i] = std::sqrt(var / samples);
  }
  return curve;
}

}  // namespace specdet
