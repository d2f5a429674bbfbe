#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>

#include "floquet/coeffs.hpp"
#include "floquet/intervals.hpp"

namespace floquet {

// Smallest integer N with N >= M / pi^2 + 1; integral values are taken as-is.
int compute_threshold(double m_norm);

// Threshold the localization plans actually run at. The small-norm regime
// defines its refinement structure relative to threshold 2, so the formula
// value (1 only when m_norm == 0) is raised to 2 there; a larger threshold is
// always admissible.
int effective_threshold(double m_norm, int n);

// Satellite half-width (3/2) * pi^(n-2) * m_norm * |2k + t|^(n-2).
double delta_radius(int k, double t, int n, double m_norm);

// True when m_norm <= pi^2 * 2^(-n + 1/2), the small-norm regime in which the
// spectrum fills the whole real line.
bool whole_line_criterion(double m_norm, int n);

// Upper bound m * (2N - 1) - 1 on the number of spectral gaps.
int gap_count_bound(int m, int threshold);

// Guaranteed band-overlap intervals for |k| >= threshold:
//   positive: ((2 pi k - pi)^n + delta_k(-1), (2 pi k + pi)^n - delta_k(1))
//   negative: ((-2 pi k - pi)^n + delta_{-k}(-1), (-2 pi k + pi)^n - delta_{-k}(1))
// Either may come back empty when the radii swallow the core; callers treat
// containment vacuously then. Throws invalid_input for k < threshold.
std::pair<Interval, Interval> overlap_intervals(int threshold, int n, double m_norm, int k);

// Complete localization picture at one quasimomentum t:
//   center_band   A(N,t) = [(-2 pi N + pi + pi t)^n, (2 pi N - pi + pi t)^n)
//   satellites    B(k,t) = ((2 pi k + pi t)^n -+ delta_k(t)) for N <= |k| <= k_max,
//                 degenerating to closed points (padded by a relative 1e-9
//                 against eigensolver roundoff) when m_norm == 0
//   boundary_gap  D(N,t) = [(2 pi N - pi + pi t)^n, (2 pi N + pi t)^n - delta_N(t))
//   gaps_between  S(k,t) = [(2 pi k + pi t)^n + delta_k(t),
//                           (2 pi (k+1) + pi t)^n - delta_{k+1}(t)] between satellites
//   small_norm    the three core refinement intervals, present only when the
//                 whole-line criterion holds (then threshold == 2)
struct LocalizationPlan {
  double t = 0.0;
  int n = 0;
  int m = 0;
  double m_norm = 0.0;
  int threshold = 1;
  int k_max = 0;
  Interval center_band;
  Interval boundary_gap;
  std::map<int, Interval> satellites;
  std::map<int, Interval> gaps_between;
  std::optional<std::array<Interval, 3>> small_norm;  // around (pi t - 2 pi)^n, (pi t)^n, (pi t + 2 pi)^n

  // Unperturbed bracketing window I(k,t) = [(2 pi k + pi t - pi)^n, (2 pi k + pi t + pi)^n).
  Interval window(int k) const;
  // Union membership test over center band and satellites.
  bool covered(double lambda) const;
};

// Builds the plan and verifies pairwise disjointness with zero slack: the
// center band against every satellite, satellites among themselves, and the
// small-norm triple against each other and the satellites. Violations throw
// disjointness_error naming the offending pair.
LocalizationPlan build_localization_plan(const OperatorSpec& spec, double m_norm, double t,
                                         int k_max);

}  // namespace floquet
