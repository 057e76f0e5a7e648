#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "specdet/correlator.hpp"
#include "specdet/mpreal.hpp"
#include "specdet/parallel.hpp"

namespace specdet {

// Saddle label: S subset of {1..2N} with |S| = N, stored as a bitmask over
// [0, 2N). S1 = S among the first N slots (gamma side), S2 = shifted-down
// second half, p = |S2|, r = |S1 cap S2|.
struct SubsetConfig {
  int n = 0;
  uint32_t mask = 0;
  int p = 0;
  int r = 0;

  static SubsetConfig make(int n, uint32_t mask) {
    SubsetConfig c;
    c.n = n;
    c.mask = mask;
    uint32_t s1 = mask & ((1u << n) - 1);
    uint32_t s2 = mask >> n;
    c.p = __builtin_popcount(s2);
    c.r = __builtin_popcount(s1 & s2);
    return c;
  }
};

// Streams the C(2N,N) subsets in ascending bitmask order (Gosper's hack).
template <typename Fn>
void enumerate_configs(int n, Fn&& fn) {
  if (n < 1) throw std::invalid_argument("enumerate_configs: n >= 1 required");
  if (n > 14) throw std::invalid_argument("enumerate_configs: cap exceeded (n <= 14)");
  const uint32_t limit = 1u << (2 * n);
  uint32_t v = (1u << n) - 1;
  while (v < limit) {
    fn(SubsetConfig::make(n, v));
    uint32_t t = v | (v - 1);
    v = (t + 1) | (((~t & (t + 1)) - 1) >> (__builtin_ctz(v) + 1));
  }
}

inline std::vector<SubsetConfig> all_configs(int n) {
  std::vector<SubsetConfig> out;
  enumerate_configs(n, [&](const SubsetConfig& c) { out.push_back(c); });
  return out;
}

// Phases phi_nu of diag(gamma D, D): phi_nu = theta_nu + x/N for nu <= N,
// phi_{nu+N} = theta_nu.
struct PhiSpectrum {
  int n = 0;
  std::vector<double> phi;  // size 2N

  static PhiSpectrum from(const EigenphaseSpectrum& sp, double x) {
    PhiSpectrum ps;
    ps.n = sp.dim();
    ps.phi.resize(2 * ps.n);
    for (int j = 0; j < ps.n; ++j) {
      ps.phi[j] = sp.thetas[j] + x / ps.n;
      ps.phi[ps.n + j] = sp.thetas[j];
    }
    return ps;
  }
};

namespace detail {

// Pairwise factor tables for one grid point. ratio(mu, nu) = 1 - w_nu / w_mu
// with w_nu = e^{i phi_nu}. pref(nu) = w_nu.
template <typename C>
struct WeylTables {
  int n = 0;
  std::vector<C> w;
  std::vector<C> ratio;  // (2N)^2, row mu, col nu
  C det_d_inv;           // prod_j e^{-i theta_j}

  const C& rat(int mu, int nu) const { return ratio[mu * 2 * n + nu]; }
};

template <typename C>
WeylTables<C> build_tables(const PhiSpectrum& ps) {
  const int n = ps.n;
  WeylTables<C> t;
  t.n = n;
  t.w.reserve(2 * n);
  for (int nu = 0; nu < 2 * n; ++nu) t.w.push_back(C::unit(ps.phi[nu]));
  const C one(1.0, 0.0);
  t.ratio.resize(4 * n * n, one);
  for (int mu = 0; mu < 2 * n; ++mu)
    for (int nu = 0; nu < 2 * n; ++nu)
      if (mu != nu) t.ratio[mu * 2 * n + nu] = one - t.w[nu] / t.w[mu];
  double s = 0;
  for (int j = 0; j < n; ++j) s += ps.phi[n + j];
  t.det_d_inv = C::unit(-s);
  return t;
}

// complex<double> needs the same tiny interface as MpComplex
struct DblComplex {
  cplx v;
  DblComplex() : v(0) {}
  DblComplex(double r, double i) : v(r, i) {}
  static DblComplex unit(double angle) {
    DblComplex z;
    z.v = std::polar(1.0, angle);
    return z;
  }
  cplx to_cplx() const { return v; }
  friend DblComplex operator-(const DblComplex& a, const DblComplex& b) {
    DblComplex r; r.v = a.v - b.v; return r;
  }
  friend DblComplex operator*(const DblComplex& a, const DblComplex& b) {
    DblComplex r; r.v = a.v * b.v; return r;
  }
  friend DblComplex operator/(const DblComplex& a, const DblComplex& b) {
    DblComplex r; r.v = a.v / b.v; return r;
  }
};

// One Weyl term. The occupied weight set is the complement of S (this is the
// reading fixed by requiring exactness at N = 1: S = {1..N} then reproduces
// the Z = 0 saddle value):
//   term_S = Det(D)^{-1} prod_{mu in Sbar} w_mu
//            / prod_{mu in Sbar, nu in S} (1 - w_nu / w_mu).
template <typename C>
C weyl_term_t(const SubsetConfig& cfg, const WeylTables<C>& t) {
  const int n2 = 2 * cfg.n;
  C num = t.det_d_inv;
  for (int mu = 0; mu < n2; ++mu)
    if (!(cfg.mask >> mu & 1u)) num = num * t.w[mu];
  C den(1.0, 0.0);
  for (int mu = 0; mu < n2; ++mu) {
    if (cfg.mask >> mu & 1u) continue;
    for (int nu = 0; nu < n2; ++nu)
      if (cfg.mask >> nu & 1u) den = den * t.rat(mu, nu);
  }
  return num / den;
}

}  // namespace detail

// Degeneracy guard: all phi differences across the S / Sbar cut must exceed
// 1e-12 (mod 2 pi).
inline void check_nondegenerate(const PhiSpectrum& ps) {
  const int n2 = 2 * ps.n;
  for (int mu = 0; mu < n2; ++mu)
    for (int nu = mu + 1; nu < n2; ++nu) {
      double d = std::remainder(ps.phi[mu] - ps.phi[nu], 2 * kPi);
      if (std::abs(d) < 1e-12)
        throw std::runtime_error("pole in Weyl term: phases " + std::to_string(mu + 1) +
                                 " and " + std::to_string(nu + 1) + " collide");
    }
}

inline cplx weyl_term(const SubsetConfig& cfg, const PhiSpectrum& ps) {
  check_nondegenerate(ps);
  auto t = detail::build_tables<detail::DblComplex>(ps);
  return detail::weyl_term_t(cfg, t).to_cplx();
}

struct WeylSumResult {
  cplx value;                       // gamma^{-N/2} sum_S term_S
  double max_term = 0.0;            // largest |term| encountered
  std::map<std::pair<int, int>, cplx> per_class;  // (p,r) -> summed terms
  bool extended_precision = false;
};

// Evaluates the full saddle sum at gamma = e^{i x / N}. Near the gamma -> 1
// pole the individual terms blow up like (x/N)^{-(N-2r)} while the sum stays
// O(Omega); once the predicted term magnitude eats the double mantissa the
// sum switches to 256-bit arithmetic. The double path sorts by descending
// magnitude and accumulates with compensation.
inline WeylSumResult weyl_sum_at(const EigenphaseSpectrum& sp, double x, int threads = 1) {
  const int n = sp.dim();
  PhiSpectrum ps = PhiSpectrum::from(sp, x);
  check_nondegenerate(ps);

  // |1 - gamma|^{-N} estimate of the worst term magnitude, in digits, vs the
  // answer scale ~2^N; switch precision when double would keep < ~9 clean
  // digits of the sum.
  double small = 2.0 * std::abs(std::sin(x / (2.0 * n)));
  double term_digits = small < 1e-12 ? 400.0 : -n * std::log10(small);
  bool use_mp = term_digits > 0.30103 * n + 4.0;

  WeylSumResult res;
  res.extended_precision = use_mp;

  if (use_mp) {
    auto t = detail::build_tables<MpComplex>(ps);
    std::map<std::pair<int, int>, MpComplex> cls;
    MpComplex acc;
    double max_term = 0.0;
    enumerate_configs(n, [&](const SubsetConfig& cfg) {
      MpComplex term = detail::weyl_term_t(cfg, t);
      acc += term;
      cls[{cfg.p, cfg.r}] += term;
      max_term = std::max(max_term, std::abs(term.to_cplx()));
    });
    MpComplex pref = MpComplex::unit(-x / 2.0);
    res.value = (pref * acc).to_cplx();
    res.max_term = max_term;
    for (auto& [key, v] : cls) res.per_class[key] = v.to_cplx();
    return res;
  }

  auto t = detail::build_tables<detail::DblComplex>(ps);
  double n_terms = binomial(2 * n, n);

  if (n_terms <= 2e6) {
    // materialize, sort by descending magnitude, compensated sum
    struct Block {
      std::vector<std::pair<SubsetConfig, cplx>> terms;
    };
    auto configs = all_configs(n);
    auto blocks = parallel_blocks<Block>(
        configs.size(), threads, [&](std::size_t lo, std::size_t hi, Block& b) {
          b.terms.reserve(hi - lo);
          for (std::size_t i = lo; i < hi; ++i)
            b.terms.emplace_back(configs[i], detail::weyl_term_t(configs[i], t).to_cplx());
        });

    std::vector<std::pair<SubsetConfig, cplx>> terms;
    terms.reserve(configs.size());
    for (auto& b : blocks)
      terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      return std::abs(a.second) > std::abs(b.second);
    });

    KahanSum<cplx> acc;
    for (auto& [cfg, term] : terms) {
      acc.add(term);
      res.per_class[{cfg.p, cfg.r}] += term;
      res.max_term = std::max(res.max_term, std::abs(term));
    }
    res.value = std::polar(1.0, -x / 2.0) * acc.value();
    return res;
  }

  // too many terms to hold: stream with compensation, skip the sort
  KahanSum<cplx> acc;
  enumerate_configs(n, [&](const SubsetConfig& cfg) {
    cplx term = detail::weyl_term_t(cfg, t).to_cplx();
    acc.add(term);
    res.per_class[{cfg.p, cfg.r}] += term;
    res.max_term = std::max(res.max_term, std::abs(term));
  });
  res.value = std::polar(1.0, -x / 2.0) * acc.value();
  return res;
}

inline CorrelatorCurve weyl_sum(const UnitaryMatrix& u, const GammaGrid& grid, int threads = 1) {
  EigenphaseSpectrum sp = eigenphases(u);
  CorrelatorCurve curve;
  curve.grid = grid;
  curve.route = "weyl";
  curve.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.x_at(i);
    double xv;
    if (x) {
      xv = *x;
    } else {
      cplx g = grid.gammas[i];
      if (std::abs(std::abs(g) - 1.0) > 1e-12)
        throw std::invalid_argument("weyl_sum: gamma must lie on the unit circle");
      xv = std::arg(g) * sp.dim();
    }
    curve.values[i] = weyl_sum_at(sp, xv, threads).value;
  }
  return curve;
}

// The two standard saddles Z = 0 and Z = infinity, prefactor convention
// C_N = 1:
//   plus  = gamma^{-N/2} / [(1-gamma)^N prod_{i != j} (1 - gamma e^{i(th_i - th_j)})]
//   minus = the same with gamma -> 1/gamma and prefactor gamma^{+N/2}.
inline std::pair<cplx, cplx> standard_saddles(const EigenphaseSpectrum& sp, cplx gamma) {
  const int n = sp.dim();
  auto contribution = [&](cplx g, cplx pref) {
    cplx den = std::pow(1.0 - g, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        cplx f = 1.0 - g * std::polar(1.0, sp.thetas[i] - sp.thetas[j]);
        if (std::abs(f) < 1e-12)
          throw std::runtime_error("standard_saddles: saddle degeneracy (gamma e^{i dtheta} = 1)");
        den *= f;
      }
    if (std::abs(1.0 - g) < 1e-12)
      throw std::runtime_error("standard_saddles: saddle degeneracy (gamma = 1)");
    return pref / den;
  };
  cplx hp = std::exp(0.5 * static_cast<double>(n) * std::log(gamma));
  return {contribution(gamma, 1.0 / hp), contribution(1.0 / gamma, hp)};
}

}  // namespace specdet
