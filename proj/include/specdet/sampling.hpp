#pragma once

#include <vector>

#include "specdet/types.hpp"

namespace specdet {

// Haar sample on U(N): complex Ginibre, QR, then fix the phases so the
// triangular factor has positive diagonal (exact Haar, not just approximate).
inline UnitaryMatrix haar_sample(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("haar_sample: n >= 1 required");
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Vector d = qr.matrixQR().diagonal();
  for (int j = 0; j < n; ++j) {
    cplx r = d(j);
    q.col(j) *= r / std::abs(r);
  }
  return UnitaryMatrix(std::move(q), 1e-10);
}

// Poisson ensemble: diagonal of iid uniform phases.
inline UnitaryMatrix poisson_sample(int n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("poisson_sample: n >= 1 required");
  Matrix m = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double th = rng.uniform(0.0, 2 * kPi);
    m(j, j) = std::polar(1.0, th);
  }
  return UnitaryMatrix(std::move(m), 1e-10);
}

// Built-in quantized map family: discrete Fourier matrix composed with a
// diagonal kick phase exp(-i n V(2 pi j / n)), V a cosine polynomial with the
// given coefficients.
inline UnitaryMatrix kicked_map(int n, const std::vector<double>& kick_strengths) {
  if (n < 1) throw std::invalid_argument("kicked_map: n >= 1 required");
  Matrix f(n, n);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      f(j, k) = std::polar(inv_sqrt, -2 * kPi * j * k / n);
  Matrix u = f;
  for (int j = 0; j < n; ++j) {
    double q = 2 * kPi * j / n;
    double v = 0.0;
    for (std::size_t m = 0; m < kick_strengths.size(); ++m)
      v += kick_strengths[m] * std::cos((m + 1) * q);
    u.col(j) *= std::polar(1.0, -n * v);
  }
  return UnitaryMatrix(std::move(u), 1e-10);
}

}  // namespace specdet
