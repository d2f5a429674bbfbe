#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "floquet/coeffs.hpp"
#include "floquet/intervals.hpp"

namespace floquet {

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double initial_step = 1e-3;
  long max_steps = 2'000'000;
};

// Fundamental system of (-i)^n Y^(n) + sum_v P_v Y^(n-v) = lambda Y over one
// period, canonical initial data (the j-th column block starts as the j-th
// derivative indicator). endpoint holds the nm x nm value at x = 1: row block
// v-1 is the (v-1)-th derivative, column block j the j-th canonical solution.
struct FundamentalSolutions {
  std::complex<double> lambda;
  Eigen::MatrixXcd endpoint;
  long steps = 0;
};

// Adaptive embedded Runge-Kutta 5(4) pass over [0, 1]. Step-size underflow or
// step-budget exhaustion throws numerical_failure naming lambda.
FundamentalSolutions integrate_fundamental(const OperatorSpec& spec, std::complex<double> lambda,
                                           const OdeOptions& opts = {});

// Fixed-step classical RK4 with `steps` steps; self-consistency reference for
// the adaptive path.
Eigen::MatrixXcd integrate_fundamental_fixed(const OperatorSpec& spec,
                                             std::complex<double> lambda, int steps);

// det(endpoint - e^{i pi t} I): vanishes exactly at the fiber eigenvalues,
// entire in lambda, constant term 1 as a polynomial in e^{i pi t}.
std::complex<double> characteristic_determinant(const OperatorSpec& spec,
                                                std::complex<double> lambda, double t,
                                                const OdeOptions& opts = {});

struct CharacteristicValue {
  std::complex<double> lambda;
  double t = 0.0;
  std::complex<double> delta;
};

// Closed form for the unperturbed operator: prod over the n-th roots w_j of
// lambda of (e^{i w_j} - e^{i pi t})^m.
std::complex<double> free_characteristic_determinant(int n, int m, std::complex<double> lambda,
                                                     double t);

// Growth envelope prod_j (1 + e^{-Im w_j})^m used to normalize |Delta| across
// windows where its raw magnitude spans many orders.
double characteristic_envelope(int n, int m, std::complex<double> lambda);

// Zeros of Delta(., t) inside the rectangle [iv.lo, iv.hi] x [-height, height],
// counted with multiplicity by boundary phase accumulation. Consecutive phase
// steps above pi/2 trigger bisection of the offending segment, at most 20
// doublings deep. Requires both real endpoints to sit in the resolvent set
// (|Delta| above resolvent_floor relative to the boundary median); violations
// and non-integer windings throw numerical_failure.
int count_roots_in_interval(const OperatorSpec& spec, double t, const Interval& iv, double height,
                            int samples_per_edge = 64, const OdeOptions& opts = {},
                            double resolvent_floor = 1e-8);

struct LocatedRoot {
  double lambda = 0.0;
  int multiplicity = 0;
};

// Real-axis root location: scan |Delta| over lambda = s^n for uniform s
// (even sample density per unperturbed eigenvalue), detect envelope-normalized
// dips, refine each by golden-section, then read the multiplicity off a
// safe-radius winding rectangle.
std::vector<LocatedRoot> locate_real_roots(const OperatorSpec& spec, double t, double lambda_lo,
                                           double lambda_hi, int scan_samples,
                                           const OdeOptions& opts = {});

}  // namespace floquet
