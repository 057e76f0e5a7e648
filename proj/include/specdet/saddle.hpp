#pragma once

#include <vector>

#include "specdet/geometry_consts.hpp"
#include "specdet/types.hpp"

namespace specdet {

inline int adjoint_side(const Matrix& ad) {
  int n2 = static_cast<int>(ad.rows());
  int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (n * n != n2 || ad.rows() != ad.cols())
    throw std::invalid_argument("expected an N^2 x N^2 adjoint matrix");
  return n;
}

// Sum of the two standard saddles for an averaged adjoint:
//   2 Re( e^{-ix/2} / Det(I - e^{ix/N} <Ad U>) ),
// times C_N when include_cn is set (default is the prefactor-free convention
// in which the full Weyl sum is exact).
inline double averaged_standard_saddles(const Matrix& ad_avg, double x, bool include_cn = false) {
  const int n = adjoint_side(ad_avg);
  Matrix m = Matrix::Identity(ad_avg.rows(), ad_avg.rows()) -
             std::polar(1.0, x / n) * ad_avg;
  cplx det = Eigen::PartialPivLU<Matrix>(m).determinant();
  if (!std::isfinite(std::abs(det)) || std::abs(det) < 1e-300)
    throw std::runtime_error("averaged saddle degenerate: Det(I - e^{ix/N} <Ad U>) ~ 0");
  double val = 2.0 * std::real(std::polar(1.0, -x / 2.0) / det);
  return include_cn ? val * normalization_cn(n) : val;
}

struct GapDiagnostic {
  double gap = 0.0;            // 1 - max_{j>=2} |lambda_j|
  double relevance_sum = 0.0;  // | sum_{j>=2} lambda_j / (1 - lambda_j) |
  std::vector<cplx> spectrum;  // all N^2 eigenvalues, unity first
};

inline GapDiagnostic gap_diagnostic(const Matrix& ad_avg) {
  adjoint_side(ad_avg);
  Eigen::ComplexEigenSolver<Matrix> es(ad_avg, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gap_diagnostic: eigensolver failed");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::size_t unit = 0;
  for (std::size_t j = 1; j < ev.size(); ++j)
    if (std::abs(ev[j] - 1.0) < std::abs(ev[unit] - 1.0)) unit = j;
  std::swap(ev[0], ev[unit]);

  GapDiagnostic d;
  d.spectrum = ev;
  double maxmod = 0.0;
  cplx rel = 0.0;
  for (std::size_t j = 1; j < ev.size(); ++j) {
    maxmod = std::max(maxmod, std::abs(ev[j]));
    rel += ev[j] / (1.0 - ev[j]);
  }
  d.gap = 1.0 - maxmod;
  d.relevance_sum = std::abs(rel);
  return d;
}

// Gapped large-N form of the averaged saddle pair:
//   N C_N / Det_perp(I - <Ad U>) * sin(x/2)/(x/2),
// Det_perp taken on the complement of the uniform mode. Requires unity to be
// a simple, separated eigenvalue.
inline double zirn_approximation(const Matrix& ad_avg, double x, bool include_cn = false) {
  const int n = adjoint_side(ad_avg);
  Eigen::ComplexEigenSolver<Matrix> es(ad_avg, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("zirn_approximation: eigensolver failed");
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::size_t unit = 0;
  for (std::size_t j = 1; j < ev.size(); ++j)
    if (std::abs(ev[j] - 1.0) < std::abs(ev[unit] - 1.0)) unit = j;
  if (std::abs(ev[unit] - 1.0) > 1e-8)
    throw std::runtime_error("zirn_approximation: no eigenvalue at unity");
  cplx det_perp = 1.0;
  for (std::size_t j = 0; j < ev.size(); ++j) {
    if (j == unit) continue;
    if (std::abs(1.0 - ev[j]) < 1e-8)
      throw std::runtime_error("no spectral gap; gapped saddle formula inapplicable");
    det_perp *= (1.0 - ev[j]);
  }
  double val = std::real(static_cast<double>(n) * sinc_half(x) / det_perp);
  return include_cn ? val * normalization_cn(n) : val;
}

}  // namespace specdet
