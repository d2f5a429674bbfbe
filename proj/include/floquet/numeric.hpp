#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace floquet {

inline constexpr double kPi = std::numbers::pi;

// Exact small integer powers (repeated multiplication keeps (2 pi k + pi t)^n
// bit-reproducible across platforms that disagree on pow()).
inline double ipow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

inline std::complex<double> ipow(std::complex<double> base, int exponent) {
  std::complex<double> out{1.0, 0.0};
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Basis frequency of block p at quasimomentum t.
inline double block_frequency(int p, double t) { return 2.0 * kPi * p + kPi * t; }

// Unperturbed fiber eigenvalue (2 pi p + pi t)^n.
inline double free_eigenvalue(int p, double t, int n) { return ipow(block_frequency(p, t), n); }

// Signed real n-th root for odd n.
inline double signed_root(double x, int n) {
  if (x == 0.0) return 0.0;
  const double r = std::pow(std::abs(x), 1.0 / n);
  return x < 0.0 ? -r : r;
}

}  // namespace floquet
