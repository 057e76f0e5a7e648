#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "specdet/numeric.hpp"

namespace specdet {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Reproducible random stream: identical (seed, stream_id) gives identical
// draws. Parallel Monte Carlo loops derive one stream per sample so results
// do not depend on how the loop is partitioned.
class RngStream {
 public:
  explicit RngStream(uint64_t seed, uint64_t stream_id = 0)
      : seed_(seed), stream_(stream_id) {
    uint64_t s = seed;
    uint64_t a = splitmix64(s);
    s ^= 0xD1B54A32D192ED03ULL * (stream_id + 1);
    uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b << 1));
    have_spare_ = false;
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_; }
  RngStream substream(uint64_t id) const {
    return RngStream(seed_, stream_ ^ (0x9E3779B97F4A7C15ULL + id));
  }

  // uniform on [0,1)
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal via Box-Muller (independent of libstdc++ internals)
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 == 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2 * kPi * u2);
  }

  cplx complex_normal() { return {normal(), normal()}; }

  std::mt19937_64& engine() { return engine_; }

 private:
  uint64_t seed_, stream_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline double unitarity_residual(const Matrix& m) {
  const auto n = m.rows();
  return (m.adjoint() * m - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

// N x N unitary; the constructor checks ||U^dag U - I||_max and records it.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(Matrix m, double tol = 1e-10) : u_(std::move(m)) {
    if (u_.rows() < 1 || u_.rows() != u_.cols())
      throw std::invalid_argument("UnitaryMatrix: matrix must be square, n >= 1");
    residual_ = specdet::unitarity_residual(u_);
    if (residual_ > tol)
      throw std::invalid_argument("UnitaryMatrix: unitarity residual " +
                                  std::to_string(residual_) + " exceeds " +
                                  std::to_string(tol));
  }

  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const { return u_; }
  double residual() const { return residual_; }

 private:
  Matrix u_;
  double residual_ = 0.0;
};

}  // namespace specdet
