#include <catch_amalgamated.hpp>

#include "specdet/correlator.hpp"
#include "specdet/fock.hpp"
#include "specdet/sampling.hpp"

using namespace specdet;

TEST_CASE("balanced basis dimensions C(2N,N)") {
  REQUIRE(build_basis(1).dim() == 2);
  REQUIRE(build_basis(2).dim() == 6);
  REQUIRE(build_basis(3).dim() == 20);
  REQUIRE(build_basis(4).dim() == 70);
  REQUIRE_THROWS_WITH(build_basis(5), Catch::Matchers::ContainsSubstring("oracle scale exceeded"));
}

TEST_CASE("rep_lie: zero, identity, representation property") {
  for (int n : {1, 2, 3}) {
    FockBasis b = build_basis(n);
    REQUIRE(rep_lie(Matrix::Zero(2 * n, 2 * n), b).m.cwiseAbs().maxCoeff() == 0.0);
    // R(I) = F+ - F- + N = N on the balanced subspace
    Matrix r1 = rep_lie(Matrix::Identity(2 * n, 2 * n), b).m;
    REQUIRE((r1 - static_cast<double>(n) * Matrix::Identity(b.dim(), b.dim()))
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
  }

  RngStream rng(21);
  FockBasis b = build_basis(2);
  auto random_x = [&]() {
    Matrix x(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) x(i, j) = rng.complex_normal();
    return x;
  };
  // skew-Hermitian X -> anti-Hermitian R(X)
  Matrix x = random_x();
  Matrix skew = 0.5 * (x - x.adjoint());
  Matrix r = rep_lie(skew, b).m;
  REQUIRE((r + r.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);

  // R([X,Y]) = [R(X), R(Y)] for 10 random pairs
  for (int t = 0; t < 10; ++t) {
    Matrix xa = random_x(), xb = random_x();
    Matrix lhs = rep_lie(xa * xb - xb * xa, b).m;
    Matrix rhs = rep_lie(xa, b).m * rep_lie(xb, b).m - rep_lie(xb, b).m * rep_lie(xa, b).m;
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("su(2) generators: algebra, spectrum, nilpotency") {
  for (int n : {1, 2, 3}) {
    FockBasis b = build_basis(n);
    auto js = su2_generators(b);
    const Matrix& up = js[0].m;
    const Matrix& down = js[1].m;
    const Matrix& j0 = js[2].m;
    REQUIRE((j0 * up - up * j0 - 2.0 * up).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE((up * down - down * up - j0).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // N = 1: J_up |0> = f+^dag f-^dag |0>
  FockBasis b1 = build_basis(1);
  auto js1 = su2_generators(b1);
  int vac = b1.index.at(0u);
  int full = b1.index.at(3u);
  REQUIRE(std::abs(js1[0].m(full, vac) - 1.0) <= 1e-14);

  // J0 spectrum on F: integers 2p - N symmetric about 0
  FockBasis b2 = build_basis(2);
  auto js2 = su2_generators(b2);
  std::vector<double> diag;
  for (int i = 0; i < b2.dim(); ++i) diag.push_back(js2[2].m(i, i).real());
  std::sort(diag.begin(), diag.end());
  std::vector<double> expect{-2, 0, 0, 0, 0, 2};
  for (int i = 0; i < 6; ++i) REQUIRE(diag[i] == Catch::Approx(expect[i]).margin(1e-12));

  // (J_up)^3 = 0 on F at N = 2 (tower height N - 2p + 1 <= 3)
  Matrix up3 = js2[0].m * js2[0].m * js2[0].m;
  REQUIRE(up3.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("Laplacian spectrum 2p(N+1-p) with tower multiplicities") {
  for (int n : {1, 2, 3, 4}) {
    FockBasis b = build_basis(n);
    Matrix lap = laplacian(b).m;
    REQUIRE((lap - lap.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
    std::map<long, int> histogram;
    for (int i = 0; i < b.dim(); ++i) {
      long rounded = std::lround(es.eigenvalues()(i));
      REQUIRE(std::abs(es.eigenvalues()(i) - rounded) <= 1e-9);
      histogram[rounded]++;
    }
    std::map<long, int> expect;
    for (int p = 0; p <= n / 2; ++p) {
      long ev = 2L * p * (n + 1 - p);
      expect[ev] += (n - 2 * p + 1) * static_cast<int>(CharacterTraces::dim_rho(n, p));
    }
    REQUIRE(histogram == expect);
  }

  // N=2 -> {0 x3, 4 x3}; N=4 p=2 eigenvalue 12 present
  FockBasis b4 = build_basis(4);
  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(b4).m);
  bool has12 = false;
  for (int i = 0; i < b4.dim(); ++i)
    if (std::abs(es.eigenvalues()(i) - 12.0) <= 1e-9) has12 = true;
  REQUIRE(has12);
}

TEST_CASE("Laplacian commutes with the embedded U(N) action") {
  RngStream rng(22);
  for (int n : {2, 3}) {
    FockBasis b = build_basis(n);
    Matrix lap = laplacian(b).m;
    for (int t = 0; t < 10; ++t) {
      Matrix x(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) = rng.complex_normal();
      Matrix big = Matrix::Zero(2 * n, 2 * n);
      big.topLeftCorner(n, n) = x;
      big.bottomRightCorner(n, n) = x;
      Matrix r = rep_lie(big, b).m;
      REQUIRE((lap * r - r * lap).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("character_trace equals the scalable routes") {
  // N = 1 closed form gamma^{-1/2}(1+gamma)
  FockBasis b1 = build_basis(1);
  Matrix m1(1, 1);
  m1(0, 0) = std::polar(1.0, 0.37);
  cplx g = std::polar(1.0, 0.52);
  cplx tr = character_trace(UnitaryMatrix(m1), g, b1);
  REQUIRE(std::abs(tr - std::exp(-0.5 * std::log(g)) * (1.0 + g)) <= 1e-10);

  // N = 2, U = I
  FockBasis b2 = build_basis(2);
  cplx tr2 = character_trace(UnitaryMatrix(Matrix::Identity(2, 2)), g, b2);
  REQUIRE(std::abs(tr2 - (1.0 + 4.0 * g + g * g) / g) <= 1e-10);

  // random pairs vs omega_secular, 20 per N
  RngStream rng(23);
  for (int n : {1, 2, 3}) {
    FockBasis b = build_basis(n);
    for (int t = 0; t < 20; ++t) {
      UnitaryMatrix u = haar_sample(n, rng);
      cplx gamma = std::polar(1.0, rng.uniform(0.05, 3.0) / n);
      cplx fock = character_trace(u, gamma, b);
      cplx sec = omega_secular(u, GammaGrid::from_gamma({gamma})).values[0];
      REQUIRE(std::abs(fock - sec) <= 1e-8 * std::max(1.0, std::abs(sec)));
    }
  }
}

TEST_CASE("character_trace survives eigenvalues near -1 via phase rotation") {
  FockBasis b = build_basis(2);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = -1.0;  // exactly at the branch cut
  d(1, 1) = std::polar(1.0, 0.4);
  UnitaryMatrix u(d);
  cplx g = std::polar(1.0, 0.3);
  cplx fock = character_trace(u, g, b);
  cplx sec = omega_secular(u, GammaGrid::from_gamma({g})).values[0];
  REQUIRE(std::abs(fock - sec) <= 1e-8 * std::max(1.0, std::abs(sec)));
}
