#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specdet/numeric.hpp"

namespace specdet {

// Evaluation grid for Omega. In x-mode the point is gamma = exp(i x / N)
// exactly, with half-integer powers taken as exp(i x m / 2N); this avoids
// principal-branch jumps when |x| > pi N. In gamma-mode powers use the
// principal logarithm.
struct GammaGrid {
  enum class Mode { gamma_values, x_values };

  Mode mode = Mode::x_values;
  std::vector<double> xs;
  std::vector<cplx> gammas;

  static GammaGrid from_x(std::vector<double> x) {
    GammaGrid g;
    g.mode = Mode::x_values;
    g.xs = std::move(x);
    return g;
  }
  static GammaGrid from_gamma(std::vector<cplx> gam) {
    GammaGrid g;
    g.mode = Mode::gamma_values;
    g.gammas = std::move(gam);
    return g;
  }
  static GammaGrid linspace_x(double a, double b, int steps) {
    std::vector<double> x(steps);
    for (int i = 0; i < steps; ++i)
      x[i] = steps == 1 ? a : a + (b - a) * i / (steps - 1);
    return from_x(std::move(x));
  }

  std::size_t size() const {
    return mode == Mode::x_values ? xs.size() : gammas.size();
  }

  cplx gamma_at(std::size_t i, int n) const {
    if (mode == Mode::x_values) return std::polar(1.0, xs[i] / n);
    return gammas[i];
  }

  std::optional<double> x_at(std::size_t i) const {
    if (mode == Mode::x_values) return xs[i];
    return std::nullopt;
  }

  // gamma^(m2/2) for integer m2 (handles the half-integer powers of Omega)
  cplx half_power(std::size_t i, int n, long m2) const {
    if (mode == Mode::x_values) return std::polar(1.0, xs[i] * m2 / (2.0 * n));
    const cplx g = gammas[i];
    if (g == cplx(1.0, 0.0)) return 1.0;
    return std::exp(0.5 * static_cast<double>(m2) * std::log(g));
  }
};

struct CorrelatorCurve {
  GammaGrid grid;
  std::vector<cplx> values;
  std::string route;
  std::string scheme;                // empty = none
  std::vector<double> stderrs;       // per-point MC standard error; empty = exact
};

}  // namespace specdet
