#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace specdet {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Compensated (Kahan-Neumaier) accumulator; keeps the running error term.
template <typename T>
class KahanSum {
 public:
  void add(T v) {
    T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
inline void KahanSum<cplx>::add(cplx v) {
  // componentwise Neumaier
  auto step = [](double& s, double& c, double x) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  };
  double sr = sum_.real(), si = sum_.imag();
  double cr = comp_.real(), ci = comp_.imag();
  step(sr, cr, v.real());
  step(si, ci, v.imag());
  sum_ = {sr, si};
  comp_ = {cr, ci};
}

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("log_binomial: k out of range");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Exact for results < 2^64 (n <= 61 covers every integer-identity check here).
inline uint64_t binomial_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // C(n-k+i, i) = C(n-k+i-1, i-1) * (n-k+i) / i, division is exact
    r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
  }
  return r;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double sinc_half(double x) {  // sin(x/2)/(x/2), removable at 0
  if (x == 0.0) return 1.0;
  return std::sin(x / 2) / (x / 2);
}

}  // namespace specdet
