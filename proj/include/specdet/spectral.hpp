#pragma once

#include <algorithm>
#include <vector>

#include "specdet/types.hpp"

namespace specdet {

struct EigenphaseSpectrum {
  std::vector<double> thetas;  // sorted ascending in [0, 2*pi)
  int dim() const { return static_cast<int>(thetas.size()); }
};

inline EigenphaseSpectrum eigenphases(const UnitaryMatrix& u) {
  Eigen::ComplexEigenSolver<Matrix> solver(u.matrix(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    double res = unitarity_residual(u.matrix());
    throw std::runtime_error("eigenphases: eigensolver failed to converge (unitarity residual " +
                             std::to_string(res) + ")");
  }
  EigenphaseSpectrum sp;
  sp.thetas.reserve(u.dim());
  for (int j = 0; j < u.dim(); ++j) {
    double th = std::arg(solver.eigenvalues()(j));
    if (th < 0) th += 2 * kPi;
    if (th >= 2 * kPi) th -= 2 * kPi;
    sp.thetas.push_back(th);
  }
  std::sort(sp.thetas.begin(), sp.thetas.end());
  return sp;
}

// Coefficients of Det(1 - s U) = sum_k s^k a_k, via the Newton recursion on
// the power traces t_l = Tr U^l. a_0 = 1 and a_N = Det(-U).
struct SecularCoefficients {
  Vector a;    // size N+1
  cplx det_u;  // (-1)^N a_N

  int dim() const { return static_cast<int>(a.size()) - 1; }
  double abs2(int k) const { return std::norm(a(k)); }
};

inline SecularCoefficients secular_coefficients(const UnitaryMatrix& u) {
  const int n = u.dim();
  std::vector<cplx> t(n + 1);
  t[0] = static_cast<double>(n);
  Matrix p = Matrix::Identity(n, n);
  for (int l = 1; l <= n; ++l) {
    p = p * u.matrix();
    t[l] = p.trace();
  }
  SecularCoefficients sc;
  sc.a = Vector(n + 1);
  sc.a(0) = 1.0;
  for (int k = 1; k <= n; ++k) {
    cplx acc = t[k];
    for (int l = 1; l < k; ++l) acc += sc.a(l) * t[k - l];
    sc.a(k) = -acc / static_cast<double>(k);
  }
  sc.det_u = (n % 2 == 0) ? sc.a(n) : -sc.a(n);
  return sc;
}

// Matrix of Z -> U Z U^{-1} in the entrywise basis, vec(Z)_(i*N+j) = Z_ij.
inline Matrix adjoint_operator(const UnitaryMatrix& u) {
  const int n = u.dim();
  const Matrix& m = u.matrix();
  Matrix ad(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          ad(i * n + j, k * n + l) = m(i, k) * std::conj(m(j, l));
  return ad;
}

// Principal matrix logarithm of a unitary (skew-Hermitian result). Throws if
// the eigenvector basis is too ill-conditioned to trust.
inline Matrix unitary_log(const Matrix& u, double tol = 1e-8) {
  Eigen::ComplexEigenSolver<Matrix> solver(u);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("unitary_log: eigensolver failed");
  const Matrix& v = solver.eigenvectors();
  Vector lab = solver.eigenvalues();
  Vector loglam(lab.size());
  for (int j = 0; j < lab.size(); ++j) loglam(j) = std::log(lab(j));
  Matrix l = v * loglam.asDiagonal() * v.inverse();
  // keep the skew-Hermitian part; roundoff leaves a tiny Hermitian residue
  Matrix skew = 0.5 * (l - l.adjoint());
  if ((l - skew).cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("unitary_log: result not skew-Hermitian; input may be far from unitary");
  return skew;
}

}  // namespace specdet
