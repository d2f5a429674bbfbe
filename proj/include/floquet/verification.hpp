#pragma once

#include <string>
#include <vector>

#include "floquet/coeffs.hpp"
#include "floquet/runconfig.hpp"

namespace floquet {

enum class PredicateStatus { pass, fail, skipped };

struct PredicateResult {
  std::string name;
  std::string claim;
  PredicateStatus status = PredicateStatus::skipped;
  std::string witness;  // counterexample data or the checked margins
};

struct VerificationSummary {
  bool all_passed = false;
  std::vector<PredicateResult> predicates;
};

const char* to_string(PredicateStatus status);

// Full predicate suite over the configured t grid: Hermitian fibers, spectral
// coverage, interval family disjointness, per-interval eigenvalue tallies,
// principal block weights, small-norm refinements, band overlaps, the gap
// budget, whole-line structure, and Galerkin/determinant count agreement.
// Predicates whose prerequisites failed are reported as skipped; all_passed
// requires every predicate to pass (skips count as failures).
VerificationSummary run_verification(const OperatorSpec& spec, const RunConfig& config);

}  // namespace floquet
