#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <span>
#include <string>

#include "floquet/errors.hpp"

namespace floquet {

inline constexpr double kHermitianTol = 1e-10;  // relative Frobenius deviation

// Trigonometric matrix polynomial P(x) = sum_c terms[c] * e^{i 2 pi c x},
// 1-periodic, square matrix valued.
struct FourierMatrixSeries {
  int dim = 0;
  std::map<int, Eigen::MatrixXcd> terms;

  int support_radius() const;
  Eigen::MatrixXcd term(int c) const;  // zero matrix when absent
  Eigen::MatrixXcd evaluate(double x) const;
  // P(x) Hermitian for every x, i.e. terms[c]^H == terms[-c].
  bool hermitian_valued(double tol) const;
};

// Differential expression data: order n (odd, > 1), system size m (even, >= 2),
// coefficient P_v multiplying the (n-v)-th derivative for v in [2, n].
struct OperatorSpec {
  int n = 0;
  int m = 0;
  std::map<int, FourierMatrixSeries> coefficients;

  int support_radius() const;
  const FourierMatrixSeries* coefficient(int v) const;  // nullptr when absent
  void validate() const;                                // throws invalid_input
};

// Perturbation size: m_value = sum_v sup_{|u|=1} ||P_v u||_{L2[0,1]}, computed
// exactly from the Fourier data; entrywise_bound is the (weaker) sum of
// entrywise L2 norms that dominates it.
struct CoefficientNorm {
  double m_value = 0.0;
  double entrywise_bound = 0.0;
  std::map<int, double> per_v;
};

CoefficientNorm compute_m_norm(const OperatorSpec& spec);

// Config I/O. The on-disk format is JSON:
//   {"n": 3, "m": 2, "coefficients": [
//     {"v": 3, "entries": [{"i": 1, "j": 1,
//        "harmonics": [{"c": 1, "re": 0.5, "im": 0.0}]}]}]}
// with 1-based entry indices. Parsing and validation errors throw invalid_input.
OperatorSpec load_operator_spec(const std::string& json_text);
OperatorSpec load_operator_spec_file(const std::string& path);
std::string operator_spec_to_json(const OperatorSpec& spec);
void save_operator_spec_file(const OperatorSpec& spec, const std::string& path);

struct SelfAdjointnessReport {
  bool self_adjoint = false;
  double max_relative_deviation = 0.0;
  double tolerance = kHermitianTol;
};

// Formal self-adjointness is checked through its computable consequence: the
// truncated fiber matrices must be Hermitian at every sampled quasimomentum.
SelfAdjointnessReport check_formal_self_adjointness(const OperatorSpec& spec,
                                                    std::span<const double> t_samples,
                                                    int truncation,
                                                    double tol = kHermitianTol);

}  // namespace floquet
