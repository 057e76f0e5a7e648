#pragma once

#include <cmath>
#include <stdexcept>

namespace specdet {

// log of Hua's integral over complex m x n matrices,
//   I(m,n) = int dZ/pi^{mn} Det(1+Z^dag Z)^{-(n+m)}
//          = [Gamma(1)...Gamma(n)][Gamma(1)...Gamma(m)] / [Gamma(1)...Gamma(n+m)].
// Empty products are 1, so I(0,n) = 1 (isolated points carry counting measure).
inline double log_hua_i(int m, int n) {
  if (m < 0 || n < 0) throw std::invalid_argument("log_hua_i: negative dimension");
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += std::lgamma(k);
  for (int k = 1; k <= m; ++k) s += std::lgamma(k);
  for (int k = 1; k <= n + m; ++k) s -= std::lgamma(k);
  return s;
}

inline double hua_i(int m, int n) { return std::exp(log_hua_i(m, n)); }

// Coherent-state measure normalization, 1/C_N = Gamma(2)...Gamma(N+1) /
// [Gamma(N+2)...Gamma(2N+1)].
inline double log_normalization_cn(int n) {
  if (n < 1) throw std::invalid_argument("log_normalization_cn: n >= 1 required");
  double s = 0.0;
  for (int k = n + 2; k <= 2 * n + 1; ++k) s += std::lgamma(k);
  for (int k = 2; k <= n + 1; ++k) s -= std::lgamma(k);
  return s;
}

inline double normalization_cn(int n) { return std::exp(log_normalization_cn(n)); }

// C_N * I(N,N); equals C(2N,N) exactly (resolution of unity traced over F).
inline double total_mass(int n) {
  return std::exp(log_normalization_cn(n) + log_hua_i(n, n));
}

}  // namespace specdet
