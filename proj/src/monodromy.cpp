#include "floquet/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "floquet/numeric.hpp"

namespace floquet {

namespace {

// Companion right-hand side of the first-order system for the full nm x nm
// fundamental matrix: rows are stacked derivative blocks Y, Y', ..., Y^(n-1).
class CompanionSystem {
 public:
  CompanionSystem(const OperatorSpec& spec, std::complex<double> lambda)
      : n_(spec.n), m_(spec.m), lambda_(lambda), i_pow_n_(ipow(std::complex<double>(0.0, 1.0), spec.n)) {
    for (const auto& [v, series] : spec.coefficients) coeffs_.emplace_back(v, &series);
  }

  Eigen::Index dim() const { return static_cast<Eigen::Index>(n_) * m_; }

  void operator()(double x, const Eigen::MatrixXcd& z, Eigen::MatrixXcd& dz) const {
    const Eigen::Index width = z.cols();
    for (int r = 0; r + 1 < n_; ++r)
      dz.middleRows(static_cast<Eigen::Index>(r) * m_, m_) =
          z.middleRows(static_cast<Eigen::Index>(r + 1) * m_, m_);
    auto top = dz.bottomRows(m_);
    top = lambda_ * z.topRows(m_);
    for (const auto& [v, series] : coeffs_) {
      const Eigen::MatrixXcd pv = series->evaluate(x);
      top -= pv * z.middleRows(static_cast<Eigen::Index>(n_ - v) * m_, m_);
    }
    top *= i_pow_n_;
    (void)width;
  }

 private:
  int n_;
  int m_;
  std::complex<double> lambda_;
  std::complex<double> i_pow_n_;
  std::vector<std::pair<int, const FourierMatrixSeries*>> coeffs_;
};

// Dormand-Prince 5(4) coefficients.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                           -5103.0 / 18656};
constexpr double kB[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84};
constexpr double kE[7] = {71.0 / 57600,      0.0,        -71.0 / 16695, 71.0 / 1920,
                          -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

double error_norm(const Eigen::MatrixXcd& err, const Eigen::MatrixXcd& y0,
                  const Eigen::MatrixXcd& y1, double atol, double rtol) {
  double acc = 0.0;
  const Eigen::Index count = err.size();
  for (Eigen::Index i = 0; i < count; ++i) {
    const double scale =
        atol + rtol * std::max(std::abs(y0.data()[i]), std::abs(y1.data()[i]));
    const double q = std::abs(err.data()[i]) / scale;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(count));
}

}  // namespace

FundamentalSolutions integrate_fundamental(const OperatorSpec& spec, std::complex<double> lambda,
                                           const OdeOptions& opts) {
  spec.validate();
  const CompanionSystem system(spec, lambda);
  const Eigen::Index dim = system.dim();

  FundamentalSolutions out;
  out.lambda = lambda;

  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(dim, dim);
  std::vector<Eigen::MatrixXcd> k(7, Eigen::MatrixXcd::Zero(dim, dim));
  Eigen::MatrixXcd stage = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd z5 = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd err = Eigen::MatrixXcd::Zero(dim, dim);

  double x = 0.0;
  double h = std::min(opts.initial_step, 1.0);
  bool fsal_ready = false;
  constexpr double kMinStep = 1e-14;

  while (x < 1.0) {
    h = std::min(h, 1.0 - x);
    if (h < kMinStep)
      throw numerical_failure("step-size underflow at lambda = (" +
                              std::to_string(lambda.real()) + ", " +
                              std::to_string(lambda.imag()) + ")");
    if (out.steps >= opts.max_steps)
      throw numerical_failure("step budget exhausted at lambda = (" +
                              std::to_string(lambda.real()) + ", " +
                              std::to_string(lambda.imag()) + ")");

    if (!fsal_ready) system(x, z, k[0]);
    stage = z + h * kA2[0] * k[0];
    system(x + kC[1] * h, stage, k[1]);
    stage = z + h * (kA3[0] * k[0] + kA3[1] * k[1]);
    system(x + kC[2] * h, stage, k[2]);
    stage = z + h * (kA4[0] * k[0] + kA4[1] * k[1] + kA4[2] * k[2]);
    system(x + kC[3] * h, stage, k[3]);
    stage = z + h * (kA5[0] * k[0] + kA5[1] * k[1] + kA5[2] * k[2] + kA5[3] * k[3]);
    system(x + kC[4] * h, stage, k[4]);
    stage = z + h * (kA6[0] * k[0] + kA6[1] * k[1] + kA6[2] * k[2] + kA6[3] * k[3] +
                     kA6[4] * k[4]);
    system(x + kC[5] * h, stage, k[5]);
    z5 = z + h * (kB[0] * k[0] + kB[2] * k[2] + kB[3] * k[3] + kB[4] * k[4] + kB[5] * k[5]);
    system(x + kC[6] * h, z5, k[6]);

    err = h * (kE[0] * k[0] + kE[2] * k[2] + kE[3] * k[3] + kE[4] * k[4] + kE[5] * k[5] +
               kE[6] * k[6]);
    const double norm = error_norm(err, z, z5, opts.abs_tol, opts.rel_tol);

    if (norm <= 1.0) {
      x += h;
      z.swap(z5);
      k[0].swap(k[6]);  // first-same-as-last
      fsal_ready = true;
      ++out.steps;
    } else {
      fsal_ready = false;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(norm, 1e-300), -0.2), 0.2, 5.0);
    h *= factor;
  }

  out.endpoint = std::move(z);
  return out;
}

Eigen::MatrixXcd integrate_fundamental_fixed(const OperatorSpec& spec,
                                             std::complex<double> lambda, int steps) {
  spec.validate();
  if (steps < 1) throw invalid_input("step count must be positive");
  const CompanionSystem system(spec, lambda);
  const Eigen::Index dim = system.dim();
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim);
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    const double x = i * h;
    system(x, z, k1);
    stage = z + 0.5 * h * k1;
    system(x + 0.5 * h, stage, k2);
    stage = z + 0.5 * h * k2;
    system(x + 0.5 * h, stage, k3);
    stage = z + h * k3;
    system(x + h, stage, k4);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return z;
}

std::complex<double> characteristic_determinant(const OperatorSpec& spec,
                                                std::complex<double> lambda, double t,
                                                const OdeOptions& opts) {
  const FundamentalSolutions fundamental = integrate_fundamental(spec, lambda, opts);
  const Eigen::Index dim = fundamental.endpoint.rows();
  const std::complex<double> mu = std::exp(std::complex<double>(0.0, kPi * t));
  return (fundamental.endpoint - mu * Eigen::MatrixXcd::Identity(dim, dim)).determinant();
}

std::complex<double> free_characteristic_determinant(int n, int m, std::complex<double> lambda,
                                                     double t) {
  const std::complex<double> mu = std::exp(std::complex<double>(0.0, kPi * t));
  if (lambda == std::complex<double>(0.0, 0.0))
    return ipow(std::complex<double>(1.0, 0.0) - mu, n * m);
  const double r = std::pow(std::abs(lambda), 1.0 / n);
  const double theta = std::arg(lambda) / n;
  std::complex<double> out{1.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double angle = theta + 2.0 * kPi * j / n;
    const std::complex<double> omega = r * std::complex<double>(std::cos(angle), std::sin(angle));
    out *= ipow(std::exp(std::complex<double>(0.0, 1.0) * omega) - mu, m);
  }
  return out;
}

double characteristic_envelope(int n, int m, std::complex<double> lambda) {
  if (lambda == std::complex<double>(0.0, 0.0)) return std::pow(2.0, n * m);
  const double r = std::pow(std::abs(lambda), 1.0 / n);
  const double theta = std::arg(lambda) / n;
  double out = 1.0;
  for (int j = 0; j < n; ++j) {
    const double im = r * std::sin(theta + 2.0 * kPi * j / n);
    out *= std::pow(1.0 + std::exp(-im), m);
  }
  return out;
}

namespace {

struct BoundarySegment {
  std::complex<double> z0, z1;
  std::complex<double> v0, v1;
  int depth;
};

}  // namespace

int count_roots_in_interval(const OperatorSpec& spec, double t, const Interval& iv, double height,
                            int samples_per_edge, const OdeOptions& opts,
                            double resolvent_floor) {
  if (iv.empty() || !(height > 0.0)) throw invalid_input("root counting needs a real rectangle");
  if (samples_per_edge < 4) throw invalid_input("need at least 4 samples per edge");

  auto delta = [&](std::complex<double> z) { return characteristic_determinant(spec, z, t, opts); };

  // Resolvent-floor precondition at the real endpoints, judged against the
  // boundary median so window-scale growth cancels.
  std::vector<std::complex<double>> corners = {
      {iv.lo, -height}, {iv.hi, -height}, {iv.hi, height}, {iv.lo, height}};
  std::vector<std::complex<double>> points;
  std::vector<std::complex<double>> values;
  for (int edge = 0; edge < 4; ++edge) {
    const std::complex<double> a = corners[edge];
    const std::complex<double> b = corners[(edge + 1) % 4];
    for (int i = 0; i < samples_per_edge; ++i) {
      const double s = static_cast<double>(i) / samples_per_edge;
      points.push_back(a + s * (b - a));
      values.push_back(delta(points.back()));
    }
  }
  std::vector<double> magnitudes(values.size());
  std::transform(values.begin(), values.end(), magnitudes.begin(),
                 [](std::complex<double> v) { return std::abs(v); });
  std::nth_element(magnitudes.begin(), magnitudes.begin() + magnitudes.size() / 2,
                   magnitudes.end());
  const double median = magnitudes[magnitudes.size() / 2];
  const double floor = resolvent_floor * median;
  for (double endpoint : {iv.lo, iv.hi}) {
    if (std::abs(delta({endpoint, 0.0})) < floor)
      throw numerical_failure("rectangle endpoint lambda=" + std::to_string(endpoint) +
                              " is too close to a root");
  }

  double total_phase = 0.0;
  const size_t count = points.size();
  for (size_t i = 0; i < count; ++i) {
    std::vector<BoundarySegment> stack;
    stack.push_back({points[i], points[(i + 1) % count], values[i], values[(i + 1) % count], 0});
    while (!stack.empty()) {
      BoundarySegment seg = stack.back();
      stack.pop_back();
      if (seg.v0 == std::complex<double>(0.0, 0.0) || seg.v1 == std::complex<double>(0.0, 0.0))
        throw numerical_failure("characteristic determinant vanished on the contour");
      const double step = std::arg(seg.v1 / seg.v0);
      if (std::abs(step) <= kPi / 2.0 || seg.depth >= 20) {
        if (seg.depth >= 20 && std::abs(step) > kPi / 2.0)
          throw numerical_failure("phase refinement exhausted on the contour");
        total_phase += step;
        continue;
      }
      const std::complex<double> mid = 0.5 * (seg.z0 + seg.z1);
      const std::complex<double> vm = delta(mid);
      stack.push_back({mid, seg.z1, vm, seg.v1, seg.depth + 1});
      stack.push_back({seg.z0, mid, seg.v0, vm, seg.depth + 1});
    }
  }

  const double winding = total_phase / (2.0 * kPi);
  const double rounded = std::round(winding);
  if (std::abs(winding - rounded) > 0.25)
    throw numerical_failure("winding number did not settle to an integer: " +
                            std::to_string(winding));
  if (rounded < -0.5) throw numerical_failure("negative winding number: " + std::to_string(winding));
  return static_cast<int>(rounded);
}

std::vector<LocatedRoot> locate_real_roots(const OperatorSpec& spec, double t, double lambda_lo,
                                           double lambda_hi, int scan_samples,
                                           const OdeOptions& opts) {
  if (!(lambda_lo < lambda_hi)) throw invalid_input("root location needs a real window");
  if (scan_samples < 16) throw invalid_input("need at least 16 scan samples");
  const int n = spec.n;
  const int m = spec.m;

  auto dip = [&](double s) {
    const double lambda = ipow(s, n);
    return std::abs(characteristic_determinant(spec, {lambda, 0.0}, t, opts)) /
           characteristic_envelope(n, m, {lambda, 0.0});
  };

  const double s_lo = signed_root(lambda_lo, n);
  const double s_hi = signed_root(lambda_hi, n);
  std::vector<double> grid(scan_samples);
  std::vector<double> values(scan_samples);
  for (int i = 0; i < scan_samples; ++i) {
    grid[i] = s_lo + (s_hi - s_lo) * i / (scan_samples - 1);
    values[i] = dip(grid[i]);
  }

  std::vector<LocatedRoot> roots;
  const int half_window = std::max(8, scan_samples / 16);
  for (int i = 1; i + 1 < scan_samples; ++i) {
    if (!(values[i] < values[i - 1] && values[i] <= values[i + 1])) continue;
    double base = 0.0;
    for (int j = std::max(0, i - half_window); j <= std::min(scan_samples - 1, i + half_window);
         ++j)
      base = std::max(base, values[j]);
    if (!(values[i] < 0.05 * base)) continue;

    // Golden-section refinement of |Delta(s^n)| over the bracketing samples.
    double a = grid[i - 1];
    double b = grid[i + 1];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = dip(c);
    double fd = dip(d);
    for (int iter = 0; iter < 80 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = dip(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = dip(d);
      }
    }
    const double s_root = 0.5 * (a + b);
    double lambda_root = ipow(s_root, n);
    const double slope = n * ipow(std::max(std::abs(s_root), kPi), n - 1);
    const double radius = 0.1 * slope * 2.0 * kPi;

    // The dip minimum is noise limited, so polish the root through the
    // multiplier: the monodromy eigenvalue nearest e^{i pi t} crosses it
    // transversally in lambda, and Gauss-Newton on that branch recovers the
    // root to integration accuracy.
    const std::complex<double> target = std::exp(std::complex<double>(0.0, kPi * t));
    auto multiplier_gap = [&](double lambda) {
      const FundamentalSolutions sol = integrate_fundamental(spec, {lambda, 0.0}, opts);
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(sol.endpoint);
      std::complex<double> best = solver.eigenvalues()[0];
      for (Eigen::Index j = 1; j < solver.eigenvalues().size(); ++j)
        if (std::abs(solver.eigenvalues()[j] - target) < std::abs(best - target))
          best = solver.eigenvalues()[j];
      return best - target;
    };
    const double scale = std::max(1.0, std::abs(lambda_root));
    for (int iter = 0; iter < 12; ++iter) {
      const double h = 1e-6 * scale;
      const std::complex<double> g = multiplier_gap(lambda_root);
      const std::complex<double> gp =
          (multiplier_gap(lambda_root + h) - multiplier_gap(lambda_root - h)) / (2.0 * h);
      if (std::abs(gp) == 0.0) break;
      const double step = -std::real(std::conj(gp) * g) / std::norm(gp);
      if (!(std::abs(step) < radius)) break;
      lambda_root += step;
      if (std::abs(step) <= 1e-12 * scale) break;
    }

    if (!roots.empty() &&
        std::abs(lambda_root - roots.back().lambda) < 1e-8 * std::max(1.0, std::abs(lambda_root)))
      continue;

    // Multiplicity from a safe-radius winding rectangle: big enough that the
    // contour stays clear of the dip's noise floor, small enough to exclude
    // the neighboring unperturbed eigenvalues.
    const int multiplicity = count_roots_in_interval(
        spec, t, Interval::open(lambda_root - radius, lambda_root + radius), radius, 32, opts);
    if (multiplicity > 0) roots.push_back({lambda_root, multiplicity});
  }
  return roots;
}

}  // namespace floquet
