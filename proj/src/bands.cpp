#include "floquet/bands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "floquet/numeric.hpp"

namespace floquet {

namespace {

bool inside_trusted(const Interval& iv, double bound) {
  return iv.lo >= -bound && iv.hi <= bound;
}

std::string count_issue(const std::string& label, const Interval& iv, int got, int expected,
                        double t) {
  std::ostringstream out;
  out << label << " " << iv.str() << " holds " << got << " eigenvalues, expected " << expected
      << " at t = " << t;
  return out.str();
}

}  // namespace

NumberedSpectrum try_number_eigenvalues(const FiberSpectrum& spectrum,
                                        const LocalizationPlan& plan) {
  NumberedSpectrum out;
  out.t = plan.t;

  // Ties at the boundary go to the positive side; the guard absorbs
  // eigensolver roundoff when a degenerate satellite sits exactly there.
  const double boundary = plan.boundary_gap.hi;
  const double tie_guard = 1e-9 * std::max(1.0, std::abs(boundary));
  const Eigen::Index count = spectrum.eigenvalues.size();
  Eigen::Index split = 0;
  while (split < count && spectrum.eigenvalues[split] < boundary - tie_guard) ++split;
  for (Eigen::Index j = split; j < count; ++j)
    out.by_index[static_cast<int>(j - split) + 1] = spectrum.eigenvalues[j];
  for (Eigen::Index j = split; j-- > 0;)
    out.by_index[-static_cast<int>(split - j)] = spectrum.eigenvalues[j];

  const int expected_center = (2 * plan.threshold - 1) * plan.m;
  if (inside_trusted(plan.center_band, spectrum.trusted_bound)) {
    const int got = spectrum.count_in(plan.center_band);
    if (got != expected_center) {
      out.counts_ok = false;
      out.issue = count_issue("center band", plan.center_band, got, expected_center, plan.t);
      return out;
    }
  }

  std::map<int, bool> checked;
  for (const auto& [k, iv] : plan.satellites) {
    if (!inside_trusted(iv, spectrum.trusted_bound)) continue;
    const int got = spectrum.count_in(iv);
    if (got != plan.m) {
      out.counts_ok = false;
      out.issue = count_issue("satellite " + std::to_string(k), iv, got, plan.m, plan.t);
      return out;
    }
    checked[std::abs(k)] = checked.count(std::abs(k)) > 0;
  }
  for (const auto& [k, both] : checked)
    if (both) out.max_checked_k = std::max(out.max_checked_k, k);
  return out;
}

std::map<int, double> number_eigenvalues(const FiberSpectrum& spectrum,
                                         const LocalizationPlan& plan) {
  NumberedSpectrum numbered = try_number_eigenvalues(spectrum, plan);
  if (!numbered.counts_ok) throw miscount_error(numbered.issue, numbered.t);
  return std::move(numbered.by_index);
}

std::vector<double> make_t_grid(int count, bool near_endpoint) {
  if (count < 1) throw invalid_input("t grid needs at least one point");
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(count) + 1);
  const double first = -1.0 + 2.0 / count;
  if (near_endpoint && -1.0 + kNearEndpointOffset < first) grid.push_back(-1.0 + kNearEndpointOffset);
  for (int i = 0; i < count; ++i) grid.push_back(-1.0 + 2.0 * (i + 1) / count);
  return grid;
}

Interval BandTable::band_range(int s) const {
  const auto it = bands.find(s);
  if (it == bands.end() || it->second.empty())
    throw invalid_input("band " + std::to_string(s) + " is not tabulated");
  const auto [lo, hi] = std::minmax_element(it->second.begin(), it->second.end());
  return Interval::closed(*lo, *hi);
}

double BandTable::max_adjacent_jump(int s) const {
  const auto it = bands.find(s);
  if (it == bands.end() || it->second.size() < 2)
    throw invalid_input("band " + std::to_string(s) + " has too few samples");
  double jump = 0.0;
  for (size_t i = 0; i + 1 < it->second.size(); ++i)
    jump = std::max(jump, std::abs(it->second[i + 1] - it->second[i]));
  return jump;
}

double BandTable::max_slope(int s) const {
  const auto it = bands.find(s);
  if (it == bands.end() || it->second.size() < 2 || t_grid.size() != it->second.size())
    throw invalid_input("band " + std::to_string(s) + " has too few samples");
  double slope = 0.0;
  for (size_t i = 0; i + 1 < it->second.size(); ++i) {
    const double dt = t_grid[i + 1] - t_grid[i];
    if (dt > 0.0)
      slope = std::max(slope, std::abs(it->second[i + 1] - it->second[i]) / dt);
  }
  return slope;
}

Interval BandTable::padded_band_range(int s) const {
  Interval range = band_range(s);
  const double pad = 2.0 * kNearEndpointOffset * max_slope(s);
  range.lo -= pad;
  range.hi += pad;
  return range;
}

BandTable build_band_table(const OperatorSpec& spec, const std::vector<double>& t_grid, int s_max,
                           int truncation) {
  spec.validate();
  if (s_max < 1) throw invalid_input("band table needs s_max >= 1");
  if (t_grid.empty()) throw invalid_input("band table needs a nonempty t grid");

  const double m_norm = compute_m_norm(spec).m_value;
  const int threshold = effective_threshold(m_norm, spec.n);
  const int k_max = threshold + (s_max + spec.m - 1) / spec.m + 1;
  const int k_trunc = default_truncation(spec, threshold, k_max, truncation);

  BandTable table;
  table.t_grid = t_grid;
  table.s_max = s_max;
  table.threshold = threshold;

  for (double t : t_grid) {
    const LocalizationPlan plan = build_localization_plan(spec, m_norm, t, k_max);
    const FiberMatrix fiber = assemble_fiber_matrix(spec, t, 1.0, k_trunc);
    const FiberSpectrum spectrum = solve_fiber(fiber);
    const std::map<int, double> numbered = number_eigenvalues(spectrum, plan);
    for (int s = 1; s <= s_max; ++s) {
      for (int sign : {1, -1}) {
        const auto it = numbered.find(sign * s);
        if (it == numbered.end())
          throw numerical_failure("band index " + std::to_string(sign * s) +
                                  " missing from the numbered spectrum at t = " +
                                  std::to_string(t));
        table.bands[sign * s].push_back(it->second);
      }
    }
  }
  return table;
}

GapReport detect_gaps(const BandTable& table, const OperatorSpec& spec, double m_norm,
                      double min_width_rel) {
  spec.validate();
  const int threshold = table.threshold;
  const double window = ipow(2.0 * kPi * threshold, spec.n);

  GapReport report;
  report.window = window;
  report.bound = gap_count_bound(spec.m, threshold);
  report.whole_line = whole_line_criterion(m_norm, spec.n);

  std::vector<std::pair<double, double>> ranges;
  for (const auto& [s, samples] : table.bands) {
    const Interval range = table.band_range(s);
    const double lo = std::max(range.lo, -window);
    const double hi = std::min(range.hi, window);
    if (lo <= hi) ranges.emplace_back(lo, hi);
  }
  std::sort(ranges.begin(), ranges.end());

  std::vector<std::pair<double, double>> merged;
  for (const auto& r : ranges) {
    if (!merged.empty() && r.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, r.second);
    else
      merged.push_back(r);
  }

  std::vector<Interval> complement;
  double cursor = -window;
  for (const auto& r : merged) {
    if (r.first > cursor) complement.push_back(Interval::open(cursor, r.first));
    cursor = std::max(cursor, r.second);
  }
  if (cursor < window) complement.push_back(Interval::open(cursor, window));

  const double width_floor = min_width_rel * 2.0 * window;
  report.min_gap_width = 0.0;
  for (const Interval& gap : complement) {
    if (gap.width() < width_floor) continue;
    if (report.gaps.empty() || gap.width() < report.min_gap_width)
      report.min_gap_width = gap.width();
    report.gaps.push_back(gap);
  }
  report.gap_count = static_cast<int>(report.gaps.size());
  report.within_bound = report.gap_count <= report.bound;
  return report;
}

GapReport detect_gaps_confirmed(const OperatorSpec& spec, int grid_count, int s_max,
                                int truncation, double min_width_rel) {
  const double m_norm = compute_m_norm(spec).m_value;
  const BandTable coarse = build_band_table(spec, make_t_grid(grid_count), s_max, truncation);
  const BandTable fine = build_band_table(spec, make_t_grid(2 * grid_count), s_max, truncation);
  const GapReport coarse_report = detect_gaps(coarse, spec, m_norm, min_width_rel);
  GapReport report = detect_gaps(fine, spec, m_norm, min_width_rel);

  std::vector<Interval> confirmed;
  for (const Interval& gap : report.gaps) {
    const bool seen = std::any_of(coarse_report.gaps.begin(), coarse_report.gaps.end(),
                                  [&](const Interval& other) { return !disjoint(gap, other); });
    if (seen) confirmed.push_back(gap);
  }
  report.gaps = std::move(confirmed);
  report.gap_count = static_cast<int>(report.gaps.size());
  report.within_bound = report.gap_count <= report.bound;
  report.min_gap_width = 0.0;
  for (const Interval& gap : report.gaps)
    if (report.min_gap_width == 0.0 || gap.width() < report.min_gap_width)
      report.min_gap_width = gap.width();
  return report;
}

OverlapCheck check_overlap(const BandTable& table, const OperatorSpec& spec, double m_norm,
                           int k) {
  spec.validate();
  const int threshold = effective_threshold(m_norm, spec.n);
  const auto [positive, negative] = overlap_intervals(threshold, spec.n, m_norm, k);

  OverlapCheck out;
  out.positive = positive;
  out.negative = negative;
  out.positive_vacuous = positive.empty();
  out.negative_vacuous = negative.empty();

  const int first_positive = (k - threshold) * spec.m + 1;
  const int first_negative = -(threshold + k) * spec.m;
  if (first_positive + spec.m - 1 > table.s_max || -first_negative > table.s_max)
    throw invalid_input("band table too small for overlap check at k = " + std::to_string(k));

  out.ok = true;
  for (int j = 0; j < spec.m; ++j) {
    if (!out.positive_vacuous && !table.padded_band_range(first_positive + j).covers(positive))
      out.ok = false;
    if (!out.negative_vacuous && !table.padded_band_range(first_negative + j).covers(negative))
      out.ok = false;
  }
  return out;
}

SmallNormStructure check_small_m_structure(const BandTable& table, const OperatorSpec& spec,
                                           double m_norm, double slack) {
  spec.validate();
  if (!whole_line_criterion(m_norm, spec.n))
    throw invalid_input("small-norm structure needs the whole-line criterion");
  const int n = spec.n;
  const int m = spec.m;
  if (3 * m > table.s_max) throw invalid_input("band table too small for small-norm structure");

  const double pin = ipow(kPi, n);
  const double side = (3.0 / 10.0) * ipow(3.0, n - 2) * pin;
  // Guaranteed cores swept by the band groups as t runs over (-1, 1].
  const Interval top = Interval::open(pin + 0.3 * pin, ipow(3.0 * kPi, n) - side);
  const Interval mid = Interval::open(-pin + pin / 5.0, pin - pin / 5.0);
  const Interval bottom = Interval::open(ipow(-3.0 * kPi, n) + side, -pin - 0.3 * pin);

  SmallNormStructure out;
  out.intervals_ok = true;
  const auto group_ok = [&](const Interval& core, int first, const char* label) {
    for (int j = 0; j < m; ++j) {
      if (!table.padded_band_range(first - j).covers(core)) {
        out.intervals_ok = false;
        if (out.issue.empty())
          out.issue = std::string(label) + " core " + core.str() + " escapes band " +
                      std::to_string(first - j);
      }
    }
  };
  group_ok(top, -1, "upper");
  group_ok(mid, -m - 1, "middle");
  group_ok(bottom, -2 * m - 1, "lower");

  const auto group_hull = [&](int first) {
    Interval hull = table.band_range(first);
    for (int j = 1; j < m; ++j) {
      const Interval r = table.band_range(first - j);
      hull.lo = std::min(hull.lo, r.lo);
      hull.hi = std::max(hull.hi, r.hi);
    }
    return hull;
  };
  const Interval top_hull = group_hull(-1);
  const Interval mid_hull = group_hull(-m - 1);
  const Interval bottom_hull = group_hull(-2 * m - 1);
  out.chain_ok = true;
  if (mid_hull.lo - bottom_hull.hi > slack) {
    out.chain_ok = false;
    if (out.issue.empty())
      out.issue = "lower and middle band groups leave a gap of " +
                  std::to_string(mid_hull.lo - bottom_hull.hi);
  }
  if (top_hull.lo - mid_hull.hi > slack) {
    out.chain_ok = false;
    if (out.issue.empty())
      out.issue = "middle and upper band groups leave a gap of " +
                  std::to_string(top_hull.lo - mid_hull.hi);
  }
  out.ok = out.intervals_ok && out.chain_ok;
  return out;
}

}  // namespace floquet
