#include <catch_amalgamated.hpp>

#include "specdet/correlator.hpp"
#include "specdet/geometry.hpp"

using namespace specdet;

TEST_CASE("Hua integrals and the normalization constant") {
  REQUIRE(hua_i(1, 1) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(hua_i(0, 1) == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(hua_i(2, 2) == Catch::Approx(1.0 / 12.0).epsilon(1e-12));
  REQUIRE(normalization_cn(1) == Catch::Approx(2.0).epsilon(1e-12));
  REQUIRE(normalization_cn(2) == Catch::Approx(72.0).epsilon(1e-12));
}

TEST_CASE("mass identity C_N I(N,N) = C(2N,N) for N <= 12") {
  for (int n = 1; n <= 12; ++n) {
    double mass = total_mass(n);
    double expect = static_cast<double>(binomial_u64(2 * n, n));
    REQUIRE(std::abs(mass - expect) <= 1e-9 * expect);
    REQUIRE(std::llround(mass) == static_cast<long long>(binomial_u64(2 * n, n)));
  }
  REQUIRE(total_mass(1) == Catch::Approx(2.0));
  REQUIRE(total_mass(2) == Catch::Approx(6.0));
  REQUIRE(total_mass(5) == Catch::Approx(252.0));
}

TEST_CASE("invariant sampling: N = 1 stereographic law (KS test)") {
  // u = |Z|^2/(1+|Z|^2) is uniform on [0,1]
  const int samples = 100000;
  std::vector<double> us(samples);
  for (int s = 0; s < samples; ++s) {
    RngStream sub = RngStream(111).substream(s);
    Matrix z = sample_invariant(1, sub);
    double z2 = std::norm(z(0, 0));
    us[s] = z2 / (1.0 + z2);
  }
  std::sort(us.begin(), us.end());
  double ks = 0.0;
  for (int i = 0; i < samples; ++i) {
    double f = us[i];
    ks = std::max(ks, std::abs(f - (i + 1.0) / samples));
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / samples));
  }
  // KS critical value at p = 0.01 is 1.63/sqrt(n)
  REQUIRE(ks <= 1.63 / std::sqrt(static_cast<double>(samples)));
}

TEST_CASE("invariant sampling: E[Det(1+Z^dag Z)^{-1}] at N = 2 (Hua ratio)") {
  // under the normalized invariant measure,
  //   E[Det(1+Z^dag Z)^{-1}] = [int dZ Det^{-5}] / [int dZ Det^{-4}];
  // the denominator is I(2,2); the numerator is evaluated by the independent
  // importance-sampled flat integral.
  const int samples = 200000;
  KahanSum<double> acc, acc2;
  for (int s = 0; s < samples; ++s) {
    RngStream sub = RngStream(112).substream(s);
    Matrix z = sample_invariant(2, sub);
    Matrix d = Matrix::Identity(2, 2) + z.adjoint() * z;
    double v = 1.0 / std::abs(d.determinant());
    acc.add(v);
    acc2.add(v * v);
  }
  double mean = acc.value() / samples;
  double var = acc2.value() / samples - mean * mean;

  KahanSum<double> acc5, acc52;
  RngStream rng5(114);
  const int s5 = 400000;
  for (int s = 0; s < s5; ++s) {
    RngStream sub = rng5.substream(s);
    Matrix z(2, 2);
    double logw = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double u = sub.uniform();
        double r2 = u / (1.0 - u);
        z(i, j) = std::polar(std::sqrt(r2), sub.uniform(0.0, 2 * kPi));
        logw += 2.0 * std::log1p(r2);
      }
    Matrix d = Matrix::Identity(2, 2) + z.adjoint() * z;
    double f = std::exp(logw - 5.0 * std::log(std::abs(d.determinant())));
    acc5.add(f);
    acc52.add(f * f);
  }
  double i5 = acc5.value() / s5;
  double i5err = std::sqrt(std::max(0.0, acc52.value() / s5 - i5 * i5) / s5);
  double predicted = i5 / hua_i(2, 2);
  double sigma = std::sqrt(var / samples) + i5err / hua_i(2, 2);
  REQUIRE(std::abs(mean - predicted) <= 3.0 * sigma);
}

TEST_CASE("Hua integral Monte Carlo verification at (1,1), (1,2), (2,2)") {
  RngStream rng(115);
  for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}}) {
    auto [est, err] = hua_i_mc(m, n, 200000, rng);
    REQUIRE(std::abs(est - hua_i(m, n)) <= 3.0 * err);
  }
}

TEST_CASE("effective action: Z = 0, gamma = 1 at U = I, determinant identity") {
  RngStream rng(116);
  UnitaryMatrix u = haar_sample(2, rng);
  cplx g = std::polar(1.0, 0.37);
  REQUIRE(std::abs(effective_action(u, g, Matrix::Zero(2, 2)) - 0.5 * 2.0 * std::log(g)) <=
          1e-12);

  UnitaryMatrix id(Matrix::Identity(2, 2));
  for (int t = 0; t < 5; ++t) {
    Matrix z(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) z(i, j) = rng.complex_normal();
    REQUIRE(std::abs(effective_action(id, cplx(1.0, 0.0), z)) <= 1e-10);

    // e^{-S} = gamma^{-N/2} Det(1 + gamma Z^dag U Z U^{-1}) / Det(1 + Z^dag Z)
    cplx s = effective_action(u, g, z);
    Matrix num = Matrix::Identity(2, 2) + g * z.adjoint() * u.matrix() * z * u.matrix().adjoint();
    Matrix den = Matrix::Identity(2, 2) + z.adjoint() * z;
    cplx direct = std::exp(-0.5 * 2.0 * std::log(g)) * num.determinant() / den.determinant();
    REQUIRE(std::abs(std::exp(-s) - direct) <= 1e-10 * std::abs(direct));
  }
}

TEST_CASE("mc_omega within 3 sigma of the exact correlator") {
  // N = 1, U = 1, gamma = 0.9 -> 0.9^{-1/2} * 1.9
  RngStream r1(117);
  UnitaryMatrix u1(Matrix::Identity(1, 1));
  auto [est1, err1] = mc_omega(u1, cplx(0.9, 0.0), 100000, r1);
  double expect1 = std::pow(0.9, -0.5) * 1.9;
  REQUIRE(std::abs(est1 - expect1) <= 3.0 * err1);

  // gamma = 1: Omega(1) = sum |a_k|^2
  RngStream r2(118);
  UnitaryMatrix u2 = haar_sample(2, r2);
  RngStream r3(119);
  auto [est2, err2] = mc_omega(u2, cplx(1.0, 0.0), 100000, r3);
  double expect2 = omega_secular(u2, GammaGrid::from_gamma({cplx(1.0, 0.0)})).values[0].real();
  REQUIRE(std::abs(est2 - expect2) <= 3.0 * err2);

  // complex gamma on the circle at N = 2
  cplx g = std::polar(1.0, 0.4 / 2);
  RngStream r4(120);
  auto [est3, err3] = mc_omega(u2, g, 200000, r4);
  cplx expect3 = omega_secular(u2, GammaGrid::from_gamma({g})).values[0];
  REQUIRE(std::abs(est3 - expect3) <= 3.0 * err3);

  REQUIRE_THROWS(mc_omega(UnitaryMatrix(Matrix::Identity(4, 4)), g, 10, r4));
}

TEST_CASE("submanifold volumes") {
  REQUIRE(vol_submanifold(4, 0, 0) == Catch::Approx(1.0));   // isolated point
  REQUIRE(vol_submanifold(2, 1, 0) == Catch::Approx(1.0));   // I(1,1) I(0,1) I(0,1)
  REQUIRE(vol_submanifold(2, 1, 1) == Catch::Approx(hua_i(1, 1) * hua_i(1, 0) * hua_i(1, 0)));
  REQUIRE_THROWS(vol_submanifold(4, 5, 0));
  REQUIRE_THROWS(vol_submanifold(4, 2, 3));

  // N-exponential smallness of the equatorial volumes
  double prev = 1.0;
  for (int n : {4, 6, 8, 10}) {
    double v = vol_submanifold(n, n / 2, 0);
    REQUIRE(v < std::exp(-0.5 * n));  // decays at least like e^{-cN}
    REQUIRE(v < prev);
    prev = v;
  }
  // strictly below the (0,0) reference times the total point count
  REQUIRE(vol_submanifold(6, 3, 1) < 1.0 * binomial(12, 6));
}

TEST_CASE("manifold census: counts and point totals") {
  auto c2 = manifold_census(2);
  REQUIRE(c2.count() == 4);
  REQUIRE(c2.expected_count == Catch::Approx(4.0));
  std::set<std::pair<int, int>> keys;
  for (const auto& e : c2.entries) keys.insert({e.p, e.r});
  REQUIRE(keys == std::set<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 0}});

  REQUIRE(manifold_census(3).count() == 6);
  REQUIRE(manifold_census(3).expected_count == Catch::Approx(6.0));

  for (int n = 1; n <= 10; ++n) {
    auto c = manifold_census(n);
    REQUIRE(static_cast<double>(c.count()) == Catch::Approx(c.expected_count));
    REQUIRE(c.total_points == Catch::Approx(static_cast<double>(binomial_u64(2 * n, n))));
  }
}
