#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "floquet/errors.hpp"
#include "floquet/localization.hpp"
#include "floquet/monodromy.hpp"
#include "floquet/numeric.hpp"
#include "support.hpp"

using namespace floquet;
using testsupport::cosine_spec;
using testsupport::coupled_spec;
using testsupport::free_spec;

namespace {

using Complex = std::complex<double>;

// Oracle for the unperturbed endpoint: with w_j the n-th roots of lambda the
// scalar solutions are e^{i w_j x}, so the canonical fundamental matrix is
// W(1) V^{-1} with V[r][j] = (i w_j)^r, broadcast over the m identical
// components.
Eigen::MatrixXcd free_endpoint_oracle(int n, int m, Complex lambda) {
  const double radius = std::pow(std::abs(lambda), 1.0 / n);
  const double angle = std::arg(lambda) / n;
  Eigen::MatrixXcd v(n, n);
  Eigen::MatrixXcd w(n, n);
  for (int j = 0; j < n; ++j) {
    const Complex root = std::polar(radius, angle + 2.0 * kPi * j / n);
    const Complex iw = Complex(0.0, 1.0) * root;
    Complex power = 1.0;
    for (int r = 0; r < n; ++r) {
      v(r, j) = power;
      w(r, j) = power * std::exp(iw);
      power *= iw;
    }
  }
  const Eigen::MatrixXcd scalar = w * v.inverse();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n * m, n * m);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j)
      out.block(r * m, j * m, m, m) = scalar(r, j) * Eigen::MatrixXcd::Identity(m, m);
  return out;
}

double rel_error(const Eigen::MatrixXcd& got, const Eigen::MatrixXcd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

}  // namespace

TEST_CASE("free endpoint matches the root-basis oracle") {
  for (Complex lambda : {Complex(kPi * kPi * kPi, 0.0), Complex(200.0, 30.0),
                         Complex(-150.0, -12.0)}) {
    const FundamentalSolutions sol = integrate_fundamental(free_spec(), lambda);
    CHECK(rel_error(sol.endpoint, free_endpoint_oracle(3, 2, lambda)) <= 1e-9);
  }
}

TEST_CASE("zero eigenvalue gives polynomial solutions") {
  // y''' = 0: canonical solutions 1, x, x^2/2, so the scalar endpoint is the
  // unit upper triangle [[1,1,1/2],[0,1,1],[0,0,1]].
  const FundamentalSolutions sol = integrate_fundamental(free_spec(), Complex(0.0, 0.0));
  Eigen::MatrixXcd scalar(3, 3);
  scalar << 1.0, 1.0, 0.5, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(6, 6);
  for (int r = 0; r < 3; ++r)
    for (int j = 0; j < 3; ++j)
      expected.block(r * 2, j * 2, 2, 2) = scalar(r, j) * Eigen::MatrixXcd::Identity(2, 2);
  CHECK(rel_error(sol.endpoint, expected) <= 1e-12);
}

TEST_CASE("adaptive and fixed-step integrations agree") {
  const OperatorSpec spec = coupled_spec();
  const Complex lambda(100.0, 5.0);
  const FundamentalSolutions adaptive = integrate_fundamental(spec, lambda);
  const Eigen::MatrixXcd fixed = integrate_fundamental_fixed(spec, lambda, 4000);
  CHECK(rel_error(adaptive.endpoint, fixed) <= 1e-8);
}

TEST_CASE("step budget exhaustion is reported") {
  OdeOptions opts;
  opts.max_steps = 10;
  CHECK_THROWS_AS(integrate_fundamental(cosine_spec(1.0), Complex(1000.0, 0.0), opts),
                  numerical_failure);
}

TEST_CASE("determinant matches the closed form for the free operator") {
  std::mt19937 rng(314159);
  std::uniform_real_distribution<double> re(-2000.0, 2000.0);
  std::uniform_real_distribution<double> im(-50.0, 50.0);
  std::uniform_real_distribution<double> ts(-0.999, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex lambda(re(rng), im(rng));
    const double t = ts(rng);
    const Complex got = characteristic_determinant(free_spec(), lambda, t);
    const Complex want = free_characteristic_determinant(3, 2, lambda, t);
    const double envelope = characteristic_envelope(3, 2, lambda);
    CHECK(std::abs(got - want) <= 1e-8 * envelope);
    CHECK(std::abs(want) <= envelope * (1.0 + 1e-12));
  }
}

TEST_CASE("closed form at lambda zero") {
  for (double t : {-0.5, 0.25, 1.0}) {
    const Complex mu = std::exp(Complex(0.0, kPi * t));
    const Complex want = std::pow(1.0 - mu, 6);
    CHECK(std::abs(free_characteristic_determinant(3, 2, Complex(0.0, 0.0), t) - want) <=
          1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("endpoint determinant is one") {
  // No (n-1)-derivative coefficient, so the Wronskian is constant.
  for (const OperatorSpec& spec : {cosine_spec(1.0), coupled_spec()}) {
    for (Complex lambda : {Complex(77.7, 0.0), Complex(-320.0, 11.0)}) {
      const FundamentalSolutions sol = integrate_fundamental(spec, lambda);
      CHECK(std::abs(sol.endpoint.determinant() - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("winding counts match the localization plan") {
  const OperatorSpec spec = cosine_spec(1.0);
  const double t = 0.3;
  const LocalizationPlan plan = build_localization_plan(spec, 1.0, t, 3);

  const Interval window2 = plan.window(2);
  const double h2 = std::max(1.0, 0.25 * window2.width());
  CHECK(count_roots_in_interval(spec, t, window2, h2) == 2);

  const Interval center = plan.center_band;
  const double hc = std::max(1.0, 0.25 * center.width());
  CHECK(count_roots_in_interval(spec, t, center, hc) == 6);

  const Interval gap = plan.boundary_gap;
  const Interval inner =
      Interval::open(gap.lo + 0.25 * gap.width(), gap.hi - 0.25 * gap.width());
  CHECK(count_roots_in_interval(spec, t, inner, std::max(1.0, 0.25 * inner.width())) == 0);
}

TEST_CASE("contours through an eigenvalue are rejected") {
  const double edge = std::pow(3.0 * kPi, 3);  // eigenvalue of the free fiber at t = 1
  const Interval iv = Interval::closed(edge - 50.0, edge);
  CHECK_THROWS_AS(count_roots_in_interval(free_spec(), 1.0, iv, 10.0), numerical_failure);
}

TEST_CASE("real root location recovers the free eigenvalues") {
  const std::vector<double> exact = {-104.64618379601188, 3.875784585037477,
                                     484.4730731296846};
  const std::vector<LocatedRoot> roots =
      locate_real_roots(free_spec(), 0.5, -500.0, 1500.0, 256);
  REQUIRE(roots.size() == exact.size());
  for (size_t i = 0; i < exact.size(); ++i) {
    CHECK(roots[i].lambda ==
          doctest::Approx(exact[i]).epsilon(1e-8));
    CHECK(roots[i].multiplicity == 2);
  }
}
