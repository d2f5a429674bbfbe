#pragma once

#include <stdexcept>
#include <string>

namespace floquet {

// Invalid user input (spec files, parameter ranges). CLI maps this to exit code 2.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical machinery gave up (step-size underflow, non-integer winding,
// endpoint too close to a root). CLI maps this to exit code 3.
class numerical_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structural claim the engine is built around failed on concrete data.
// CLI verification records these as falsified predicates (exit code 1).
class structural_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two localization intervals that must be pairwise disjoint overlap.
class disjointness_error : public structural_failure {
 public:
  disjointness_error(const std::string& what, int first, int second)
      : structural_failure(what), first_k(first), second_k(second) {}
  int first_k;
  int second_k;
};

// An interval holds the wrong number of eigenvalues.
class miscount_error : public structural_failure {
 public:
  miscount_error(const std::string& what, double t_value) : structural_failure(what), t(t_value) {}
  double t;
};

}  // namespace floquet
