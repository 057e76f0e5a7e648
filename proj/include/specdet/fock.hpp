#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "specdet/spectral.hpp"

namespace specdet {

// Exact diagonalization oracle on 2N fermion modes. Mode order is
// +1..+N then -1..-N (mode m = i is f_{+,i+1}, mode m = N+i is f_{-,i+1});
// Jordan-Wigner: a creation/annihilation on mode m picks up the parity of the
// occupied modes below m. Kept to N <= 4 (dim C(8,4) = 70); this module only
// certifies the scalable routes.
struct FockBasis {
  int n = 0;
  std::vector<uint32_t> states;                 // balanced bitstrings, ascending
  std::unordered_map<uint32_t, int> index;

  int dim() const { return static_cast<int>(states.size()); }
  int plus_count(uint32_t s) const { return __builtin_popcount(s & ((1u << n) - 1)); }
};

inline FockBasis build_basis(int n) {
  if (n < 1) throw std::invalid_argument("build_basis: n >= 1 required");
  if (n > 4) throw std::invalid_argument("build_basis: oracle scale exceeded (n <= 4)");
  FockBasis b;
  b.n = n;
  const uint32_t plus_mask = (1u << n) - 1;
  for (uint32_t s = 0; s < (1u << (2 * n)); ++s) {
    if (__builtin_popcount(s & plus_mask) == __builtin_popcount(s >> n))
      b.states.push_back(s);
  }
  for (int i = 0; i < b.dim(); ++i) b.index[b.states[i]] = i;
  return b;
}

struct FockOperator {
  const FockBasis* basis = nullptr;
  Matrix m;
};

namespace detail {

inline int jw_sign(uint32_t s, int mode) {
  return (__builtin_popcount(s & ((1u << mode) - 1)) & 1) ? -1 : 1;
}

// returns false if the state is annihilated
inline bool apply_create(uint32_t& s, int& sign, int mode) {
  if (s & (1u << mode)) return false;
  sign *= jw_sign(s, mode);
  s |= (1u << mode);
  return true;
}

inline bool apply_annihilate(uint32_t& s, int& sign, int mode) {
  if (!(s & (1u << mode))) return false;
  sign *= jw_sign(s, mode);
  s &= ~(1u << mode);
  return true;
}

// Adds coeff * op2(mode2) op1(mode1) to M (op1 applied first).
// kind: 'c' creation, 'a' annihilation.
inline void add_bilinear(Matrix& m, const FockBasis& b, cplx coeff,
                         char kind1, int mode1, char kind2, int mode2) {
  if (coeff == cplx(0.0, 0.0)) return;
  for (int col = 0; col < b.dim(); ++col) {
    uint32_t s = b.states[col];
    int sign = 1;
    bool ok = (kind1 == 'c') ? apply_create(s, sign, mode1) : apply_annihilate(s, sign, mode1);
    if (!ok) continue;
    ok = (kind2 == 'c') ? apply_create(s, sign, mode2) : apply_annihilate(s, sign, mode2);
    if (!ok) continue;
    auto it = b.index.find(s);
    if (it == b.index.end())
      throw std::logic_error("fock: bilinear left the balanced subspace");
    m(it->second, col) += coeff * static_cast<double>(sign);
  }
}

}  // namespace detail

// Lie-algebra representation R(X) for a 2N x 2N block matrix
// X = [[a, b], [c, d]]:
//   R(X) = a_ij f+_i^dag f+_j + b_ij f+_i^dag f-_j^dag
//        + c_ij f-_i f+_j    + d_ij f-_i f-_j^dag .
// Note the d-term order (annihilator left), so R(I_2N) = F+ - F- + N.
inline FockOperator rep_lie(const Matrix& x, const FockBasis& b) {
  const int n = b.n;
  if (x.rows() != 2 * n || x.cols() != 2 * n)
    throw std::invalid_argument("rep_lie: X must be 2N x 2N");
  FockOperator op;
  op.basis = &b;
  op.m = Matrix::Zero(b.dim(), b.dim());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      detail::add_bilinear(op.m, b, x(i, j), 'a', j, 'c', i);               // a: f+_i^dag f+_j
      detail::add_bilinear(op.m, b, x(i, n + j), 'c', n + j, 'c', i);       // b: f+_i^dag f-_j^dag
      detail::add_bilinear(op.m, b, x(n + i, j), 'a', j, 'a', n + i);       // c: f-_i f+_j
      detail::add_bilinear(op.m, b, x(n + i, n + j), 'c', n + j, 'a', n + i);  // d: f-_i f-_j^dag
    }
  }
  return op;
}

// J_up = sum_i f+_i^dag f-_i^dag, J_down = sum_i f-_i f+_i, J0 = F+ + F- - N.
inline std::array<FockOperator, 3> su2_generators(const FockBasis& b) {
  const int n = b.n;
  FockOperator up, down, j0;
  up.basis = down.basis = j0.basis = &b;
  up.m = Matrix::Zero(b.dim(), b.dim());
  down.m = Matrix::Zero(b.dim(), b.dim());
  j0.m = Matrix::Zero(b.dim(), b.dim());
  for (int i = 0; i < n; ++i) {
    detail::add_bilinear(up.m, b, 1.0, 'c', n + i, 'c', i);
    detail::add_bilinear(down.m, b, 1.0, 'a', i, 'a', n + i);
  }
  for (int col = 0; col < b.dim(); ++col)
    j0.m(col, col) = 2.0 * b.plus_count(b.states[col]) - n;
  return {up, down, j0};
}

// Laplace-Beltrami Casimir on F:
//   Delta = (N+1)(F+ + F-) - (F+^2 + F-^2) - 2 J_up J_down,
// spectrum 2p(N+1-p) on the tower rho_p.
inline FockOperator laplacian(const FockBasis& b) {
  const int n = b.n;
  auto js = su2_generators(b);
  FockOperator lap;
  lap.basis = &b;
  lap.m = -2.0 * (js[0].m * js[1].m);
  for (int col = 0; col < b.dim(); ++col) {
    double f = b.plus_count(b.states[col]);  // F+ = F- on the balanced subspace
    lap.m(col, col) += (n + 1.0) * 2.0 * f - 2.0 * f * f;
  }
  return lap;
}

// Omega via the exact trace over F:
//   Omega = Tr_F gamma^{(F+ + F- - N)/2} exp sum_ij (log U)_ij
//             (f+_i^dag f+_j - f-_j^dag f-_i).
// If U has an eigenvalue within 1e-6 of -1 the principal log is taken after
// a global phase rotation; Omega is invariant under global phases.
inline cplx character_trace(const UnitaryMatrix& u, cplx gamma, const FockBasis& b) {
  const int n = b.n;
  if (u.dim() != n) throw std::invalid_argument("character_trace: dimension mismatch");

  Matrix um = u.matrix();
  Eigen::ComplexEigenSolver<Matrix> es(um, false);
  double closest = (es.eigenvalues().array() + 1.0).abs().minCoeff();
  for (int attempt = 0; closest < 1e-6; ++attempt) {
    if (attempt > 8)
      throw std::runtime_error(
          "character_trace: log branch failure persists; rotate U by a global phase");
    um *= std::polar(1.0, 0.4 + 0.11 * attempt);
    Eigen::ComplexEigenSolver<Matrix> es2(um, false);
    closest = (es2.eigenvalues().array() + 1.0).abs().minCoeff();
  }
  Matrix l = unitary_log(um);

  Matrix x = Matrix::Zero(2 * n, 2 * n);
  x.topLeftCorner(n, n) = l;
  x.bottomRightCorner(n, n) = l;
  // R(diag(L, L)) = sum L_ij (f+_i^dag f+_j - f-_j^dag f-_i) + Tr L
  Matrix m = rep_lie(x, b).m - l.trace() * Matrix::Identity(b.dim(), b.dim());

  // m is skew-Hermitian: exponentiate through the Hermitian part of -i m
  Matrix h = cplx(0, -1) * m;
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> saes(h);
  Eigen::VectorXd phases = saes.eigenvalues();
  Matrix v = saes.eigenvectors();
  Vector expph(phases.size());
  for (int j = 0; j < phases.size(); ++j) expph(j) = std::polar(1.0, phases(j));
  Matrix em = v * expph.asDiagonal() * v.adjoint();

  cplx logg = std::log(gamma);
  KahanSum<cplx> acc;
  for (int j = 0; j < b.dim(); ++j) {
    double p = b.plus_count(b.states[j]);
    acc.add(std::exp((p - n / 2.0) * logg) * em(j, j));
  }
  return acc.value();
}

}  // namespace specdet
