#pragma once

#include <map>
#include <string>
#include <vector>

#include "floquet/galerkin.hpp"
#include "floquet/localization.hpp"

namespace floquet {

// Eigenvalue numeration relative to the eigenvalue-free buffer D(N,t):
// values at or above its right end get indices 1, 2, ... ascending; values
// below get -1, -2, ... descending. counts_ok reports the per-interval tallies
// (m per satellite, (2N-1)m in the center band) over the trusted window.
struct NumberedSpectrum {
  double t = 0.0;
  std::map<int, double> by_index;
  int max_checked_k = 0;
  bool counts_ok = true;
  std::string issue;
};

NumberedSpectrum try_number_eigenvalues(const FiberSpectrum& spectrum,
                                        const LocalizationPlan& plan);
// Same, but a failed tally throws miscount_error.
std::map<int, double> number_eigenvalues(const FiberSpectrum& spectrum,
                                         const LocalizationPlan& plan);

// Uniform grid over (-1, 1]: count points ending exactly at 1, plus an extra
// near-endpoint sample -1 + 1e-6 (when requested) realizing the open end.
std::vector<double> make_t_grid(int count, bool near_endpoint = true);
inline constexpr double kNearEndpointOffset = 1e-6;

struct BandTable {
  std::vector<double> t_grid;
  int s_max = 0;
  int threshold = 1;
  std::map<int, std::vector<double>> bands;  // index s -> lambda_s over t_grid

  Interval band_range(int s) const;          // closed hull of the samples
  double max_adjacent_jump(int s) const;
  double max_slope(int s) const;             // max |d lambda / d t| between samples

  // Hull widened by 2 * kNearEndpointOffset * max_slope(s): the open end of
  // the quasimomentum range is sampled at -1 + kNearEndpointOffset, so the
  // sweep can fall short of its t -> -1 limit by at most a slope-scale tail.
  Interval padded_band_range(int s) const;
};

// Band functions lambda_s over the grid for 1 <= |s| <= s_max. truncation == 0
// picks the default. Tally failures propagate as miscount_error annotated with
// the offending t.
BandTable build_band_table(const OperatorSpec& spec, const std::vector<double>& t_grid, int s_max,
                           int truncation = 0);

struct GapReport {
  double window = 0.0;  // analysis window is [-window, window]
  int bound = 0;
  int gap_count = 0;
  bool within_bound = true;
  bool whole_line = false;
  double min_gap_width = 0.0;
  std::vector<Interval> gaps;
};

// Complement of the union of band-range closures inside [-W, W] with
// W = (2 pi N)^n; the half lines beyond +-W carry spectrum unconditionally.
// Components narrower than min_width_rel * 2W are sampling slivers (band
// junctions that close only in the t -> -1 limit) and are dropped.
GapReport detect_gaps(const BandTable& table, const OperatorSpec& spec, double m_norm,
                      double min_width_rel = 1e-4);

// Two-resolution confirmation: gaps reported from the doubled grid, kept only
// when an overlapping gap also appears on the base grid.
GapReport detect_gaps_confirmed(const OperatorSpec& spec, int grid_count, int s_max,
                                int truncation = 0, double min_width_rel = 1e-4);

struct OverlapCheck {
  bool ok = false;
  bool positive_vacuous = false;
  bool negative_vacuous = false;
  Interval positive;
  Interval negative;
};

// The guaranteed overlap intervals for satellite k must lie inside each of the
// m corresponding band ranges on both sides of the spectrum.
OverlapCheck check_overlap(const BandTable& table, const OperatorSpec& spec, double m_norm, int k);

struct SmallNormStructure {
  bool ok = false;
  bool intervals_ok = false;  // three guaranteed core intervals inside their band groups
  bool chain_ok = false;      // consecutive band-group closures intersect
  std::string issue;
};

// Small-norm regime structure: the three core intervals land in the band
// groups {-1..-m}, {-m-1..-2m}, {-2m-1..-3m}, and the group closures chain up
// (within `slack`) so the spectrum covers the line. Requires the whole-line
// criterion; otherwise throws invalid_input.
SmallNormStructure check_small_m_structure(const BandTable& table, const OperatorSpec& spec,
                                           double m_norm, double slack);

}  // namespace floquet
