#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "floquet/coeffs.hpp"
#include "floquet/numeric.hpp"

namespace testsupport {

using floquet::FourierMatrixSeries;
using floquet::OperatorSpec;

// Third-order scalar-block operator with no perturbation.
inline OperatorSpec free_spec(int n = 3, int m = 2) {
  OperatorSpec spec;
  spec.n = n;
  spec.m = m;
  return spec;
}

// P_n(x) = sqrt(2) * amplitude * cos(2 pi x) * I, so the working norm equals
// `amplitude` exactly.
inline OperatorSpec cosine_spec(double amplitude, int n = 3, int m = 2) {
  OperatorSpec spec;
  spec.n = n;
  spec.m = m;
  FourierMatrixSeries series;
  series.dim = m;
  const double half = std::sqrt(2.0) * amplitude / 2.0;
  Eigen::MatrixXcd term = half * Eigen::MatrixXcd::Identity(m, m);
  series.terms[1] = term;
  series.terms[-1] = term;
  spec.coefficients[n] = series;
  return spec;
}

// Constant skew-Hermitian P_2. For odd order the fiber stays Hermitian only
// when the even-slot coefficient is skew.
inline OperatorSpec skew_p2_spec() {
  OperatorSpec spec;
  spec.n = 3;
  spec.m = 2;
  FourierMatrixSeries series;
  series.dim = 2;
  Eigen::MatrixXcd s(2, 2);
  const std::complex<double> i(0.0, 1.0);
  s << 0.3 * i, 0.2 + 0.1 * i, -0.2 + 0.1 * i, -0.4 * i;
  series.terms[0] = s;
  spec.coefficients[2] = series;
  return spec;
}

// Constant Hermitian P_2: Hermitian-valued pointwise, yet the fiber it
// produces is not Hermitian. Negative control for the self-adjointness check.
inline OperatorSpec hermitian_p2_spec() {
  OperatorSpec spec;
  spec.n = 3;
  spec.m = 2;
  FourierMatrixSeries series;
  series.dim = 2;
  Eigen::MatrixXcd h(2, 2);
  const std::complex<double> i(0.0, 1.0);
  h << 0.5, 0.2 + 0.1 * i, 0.2 - 0.1 * i, -0.3;
  series.terms[0] = h;
  spec.coefficients[2] = series;
  return spec;
}

// P_2(x) = 2 cos(2 pi x) * I. Hermitian-valued, not formally self-adjoint.
inline OperatorSpec cosine_p2_spec() {
  OperatorSpec spec;
  spec.n = 3;
  spec.m = 2;
  FourierMatrixSeries series;
  series.dim = 2;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(2, 2);
  series.terms[1] = term;
  series.terms[-1] = term;
  spec.coefficients[2] = series;
  return spec;
}

// P_3(x) = cos(2 pi x) * [[2, 1], [1, 2]]. Couples the two components; its
// working norm is sqrt(4.5).
inline OperatorSpec coupled_spec() {
  OperatorSpec spec;
  spec.n = 3;
  spec.m = 2;
  FourierMatrixSeries series;
  series.dim = 2;
  Eigen::MatrixXcd base(2, 2);
  base << 2.0, 1.0, 1.0, 2.0;
  series.terms[1] = 0.5 * base;
  series.terms[-1] = 0.5 * base;
  spec.coefficients[3] = series;
  return spec;
}

}  // namespace testsupport
