#pragma once

#include <Eigen/Dense>
#include <limits>

#include "floquet/coeffs.hpp"
#include "floquet/intervals.hpp"

namespace floquet {

// Eigenvalues with |lambda| above (2 pi (K - kTrustGuard))^n are treated as
// truncation artifacts and excluded from structural checks.
inline constexpr int kTrustGuard = 4;

// Truncated fiber matrix over the exponential basis e^{i (2 pi p + pi t) x},
// |p| <= truncation, in m-sized blocks:
//   block(p,q) = delta_pq (2 pi p + pi t)^n I
//              + epsilon * sum_v (i (2 pi q + pi t))^(n-v) * P_v_term(p - q).
struct FiberMatrix {
  double t = 0.0;
  double epsilon = 1.0;
  int truncation = 0;
  int block_dim = 0;
  int order = 0;  // differential order n
  Eigen::MatrixXcd data;
  double hermitian_deviation = 0.0;  // relative Frobenius

  int block_count() const { return 2 * truncation + 1; }
  Eigen::Index index(int p, int component) const {
    return static_cast<Eigen::Index>(p + truncation) * block_dim + component;
  }
  Eigen::MatrixXcd block(int p, int q) const;
};

// Assembles the fiber matrix and records its Hermitian deviation. Deviation
// above hermitian_tol throws structural_failure (non-self-adjoint input); pass
// +infinity to inspect such assemblies anyway.
FiberMatrix assemble_fiber_matrix(const OperatorSpec& spec, double t, double epsilon,
                                  int truncation, double hermitian_tol = kHermitianTol);

struct FiberSpectrum {
  double t = 0.0;
  double epsilon = 1.0;
  int truncation = 0;
  int block_dim = 0;
  Eigen::VectorXd eigenvalues;    // ascending
  Eigen::MatrixXd block_weights;  // (2K+1) rows; column j holds the block norms of eigenvector j
  double trusted_bound = 0.0;     // (2 pi (K - kTrustGuard))^n

  bool trusted(Eigen::Index j) const { return std::abs(eigenvalues[j]) <= trusted_bound; }
  // Euclidean norm of the p-th m-block of eigenvector j; the per-eigenvector
  // weights square-sum to 1.
  double weight(Eigen::Index j, int p) const {
    return block_weights(static_cast<Eigen::Index>(p + truncation), j);
  }
  int count_in(const Interval& iv, bool trusted_only = true) const;
};

// Dense Hermitian eigensolve of the fiber matrix.
FiberSpectrum solve_fiber(const FiberMatrix& fiber);

// Truncation choice: max(2 * threshold + 8, support radius + 8, k_need + 8, user).
int default_truncation(const OperatorSpec& spec, int threshold, int k_need, int user = 0);

}  // namespace floquet
