#include "floquet/galerkin.hpp"

#include <cmath>

#include "floquet/numeric.hpp"

namespace floquet {

Eigen::MatrixXcd FiberMatrix::block(int p, int q) const {
  return data.block(index(p, 0), index(q, 0), block_dim, block_dim);
}

FiberMatrix assemble_fiber_matrix(const OperatorSpec& spec, double t, double epsilon,
                                  int truncation, double hermitian_tol) {
  spec.validate();
  if (t <= -1.0 || t > 1.0) throw invalid_input("quasimomentum t must lie in (-1, 1]");
  if (truncation < 1) throw invalid_input("truncation must be positive");

  FiberMatrix fiber;
  fiber.t = t;
  fiber.epsilon = epsilon;
  fiber.truncation = truncation;
  fiber.block_dim = spec.m;
  fiber.order = spec.n;
  const Eigen::Index size = static_cast<Eigen::Index>(spec.m) * (2 * truncation + 1);
  fiber.data = Eigen::MatrixXcd::Zero(size, size);

  for (int p = -truncation; p <= truncation; ++p) {
    fiber.data.block(fiber.index(p, 0), fiber.index(p, 0), spec.m, spec.m) =
        free_eigenvalue(p, t, spec.n) * Eigen::MatrixXcd::Identity(spec.m, spec.m);
  }
  for (const auto& [v, series] : spec.coefficients) {
    for (int q = -truncation; q <= truncation; ++q) {
      const std::complex<double> symbol =
          ipow(std::complex<double>(0.0, block_frequency(q, t)), spec.n - v);
      for (const auto& [c, term] : series.terms) {
        const int p = q + c;
        if (p < -truncation || p > truncation) continue;
        fiber.data.block(fiber.index(p, 0), fiber.index(q, 0), spec.m, spec.m) +=
            epsilon * symbol * term;
      }
    }
  }

  const double scale = std::max(1.0, fiber.data.norm());
  fiber.hermitian_deviation =
      (fiber.data - fiber.data.adjoint()).norm() / scale;
  if (fiber.hermitian_deviation > hermitian_tol)
    throw structural_failure("fiber matrix is not Hermitian (relative deviation " +
                             std::to_string(fiber.hermitian_deviation) +
                             "); the operator data is not formally self-adjoint");
  return fiber;
}

int FiberSpectrum::count_in(const Interval& iv, bool trusted_only) const {
  int count = 0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    if (trusted_only && !trusted(j)) continue;
    if (iv.contains(eigenvalues[j])) ++count;
  }
  return count;
}

FiberSpectrum solve_fiber(const FiberMatrix& fiber) {
  FiberSpectrum spectrum;
  spectrum.t = fiber.t;
  spectrum.epsilon = fiber.epsilon;
  spectrum.truncation = fiber.truncation;
  spectrum.block_dim = fiber.block_dim;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(fiber.data);
  if (solver.info() != Eigen::Success)
    throw numerical_failure("fiber eigensolve failed to converge");
  spectrum.eigenvalues = solver.eigenvalues();

  const int blocks = fiber.block_count();
  const Eigen::Index count = spectrum.eigenvalues.size();
  spectrum.block_weights.resize(blocks, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (int b = 0; b < blocks; ++b) {
      spectrum.block_weights(b, j) =
          solver.eigenvectors()
              .col(j)
              .segment(static_cast<Eigen::Index>(b) * fiber.block_dim, fiber.block_dim)
              .norm();
    }
  }
  // Everything beyond the guard band is exposed to truncation error; callers
  // gate structural claims on trusted().
  const int guarded = std::max(1, fiber.truncation - kTrustGuard);
  spectrum.trusted_bound = ipow(2.0 * kPi * guarded, fiber.order);
  return spectrum;
}

int default_truncation(const OperatorSpec& spec, int threshold, int k_need, int user) {
  int k = std::max(2 * threshold + 8, spec.support_radius() + 8);
  k = std::max(k, k_need + 8);
  k = std::max(k, user);
  return k;
}

}  // namespace floquet
