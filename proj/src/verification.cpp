#include "floquet/verification.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "floquet/bands.hpp"
#include "floquet/errors.hpp"
#include "floquet/galerkin.hpp"
#include "floquet/localization.hpp"
#include "floquet/monodromy.hpp"
#include "floquet/numeric.hpp"

namespace floquet {

const char* to_string(PredicateStatus status) {
  switch (status) {
    case PredicateStatus::pass:
      return "pass";
    case PredicateStatus::fail:
      return "fail";
    default:
      return "skipped";
  }
}

namespace {

std::string fmt(double value) {
  std::ostringstream out;
  out.precision(12);
  out << value;
  return out.str();
}

PredicateResult make(const std::string& name, const std::string& claim) {
  PredicateResult r;
  r.name = name;
  r.claim = claim;
  return r;
}

}  // namespace

VerificationSummary run_verification(const OperatorSpec& spec, const RunConfig& config) {
  spec.validate();
  const CoefficientNorm norm = compute_m_norm(spec);
  const double m_norm = norm.m_value;
  const int n = spec.n;
  const int m = spec.m;
  const int threshold = effective_threshold(m_norm, spec.n);
  const int k_max = config.k_max > 0 ? config.k_max : threshold + 4;
  if (k_max < threshold) throw invalid_input("k_max must be at least the localization threshold");
  const int s_max = config.s_max > 0 ? config.s_max : (k_max - threshold + 1) * m;
  const int k_trunc = default_truncation(spec, threshold, k_max + (s_max + m - 1) / m, config.truncation);
  const std::vector<double> grid = make_t_grid(config.t_count);
  const double mono_window =
      config.monodromy_window > 0.0 ? config.monodromy_window : ipow(6.0 * kPi, n);
  OdeOptions ode;
  ode.abs_tol = config.ode_abs_tol;
  ode.rel_tol = config.ode_rel_tol;

  VerificationSummary summary;
  auto& out = summary.predicates;

  // 1. Hermitian fibers.
  PredicateResult hermitian =
      make("hermitian_fiber", "fiber matrices are Hermitian within " + fmt(config.hermitian_tol) +
                                  " relative Frobenius deviation over the t grid");
  std::vector<FiberMatrix> fibers;
  double worst_deviation = 0.0;
  for (double t : grid) {
    fibers.push_back(
        assemble_fiber_matrix(spec, t, 1.0, k_trunc, std::numeric_limits<double>::infinity()));
    worst_deviation = std::max(worst_deviation, fibers.back().hermitian_deviation);
  }
  const bool hermitian_ok = worst_deviation <= config.hermitian_tol;
  hermitian.status = hermitian_ok ? PredicateStatus::pass : PredicateStatus::fail;
  hermitian.witness = "max relative deviation " + fmt(worst_deviation);
  out.push_back(hermitian);

  // 2. Zero-slack disjointness of the localization intervals.
  PredicateResult disjointness =
      make("interval_family_disjoint",
           "center band, satellites, and small-norm cores are pairwise disjoint with zero slack");
  std::vector<LocalizationPlan> plans;
  bool plans_ok = true;
  for (double t : grid) {
    try {
      plans.push_back(build_localization_plan(spec, m_norm, t, k_max));
    } catch (const disjointness_error& e) {
      plans_ok = false;
      disjointness.status = PredicateStatus::fail;
      disjointness.witness = std::string(e.what()) + " at t = " + fmt(t);
      break;
    }
  }
  if (plans_ok) {
    disjointness.status = PredicateStatus::pass;
    disjointness.witness = "checked |k| <= " + std::to_string(k_max) + " over " +
                           std::to_string(grid.size()) + " grid points";
  }
  out.push_back(disjointness);

  // Eigensolves shared by the Galerkin-side predicates.
  std::vector<FiberSpectrum> spectra;
  if (hermitian_ok)
    for (const FiberMatrix& fiber : fibers) spectra.push_back(solve_fiber(fiber));

  // 3. Per-interval eigenvalue tallies.
  PredicateResult tallies =
      make("eigenvalue_tallies", "each trusted satellite holds exactly m eigenvalues and the "
                                 "center band exactly (2N-1)m, at every grid point");
  bool tallies_ok = false;
  if (!hermitian_ok || !plans_ok) {
    tallies.witness = "prerequisite predicate failed";
  } else {
    tallies_ok = true;
    int min_checked = std::numeric_limits<int>::max();
    for (size_t i = 0; i < grid.size(); ++i) {
      const NumberedSpectrum numbered = try_number_eigenvalues(spectra[i], plans[i]);
      if (!numbered.counts_ok) {
        tallies_ok = false;
        tallies.witness = numbered.issue;
        break;
      }
      min_checked = std::min(min_checked, numbered.max_checked_k);
    }
    if (tallies_ok)
      tallies.witness = "tallies verified through |k| = " + std::to_string(min_checked);
    tallies.status = tallies_ok ? PredicateStatus::pass : PredicateStatus::fail;
  }
  out.push_back(tallies);

  // 4. Trusted eigenvalues stay inside the localization union.
  PredicateResult coverage =
      make("spectral_coverage",
           "every trusted eigenvalue inside the resolved window lies in the center band or a "
           "satellite");
  if (!hermitian_ok || !plans_ok) {
    coverage.witness = "prerequisite predicate failed";
  } else {
    bool ok = true;
    long checked = 0;
    for (size_t i = 0; i < grid.size() && ok; ++i) {
      const double lo_cov = plans[i].window(-k_max).lo;
      const double hi_cov = plans[i].window(k_max).hi;
      for (Eigen::Index j = 0; j < spectra[i].eigenvalues.size(); ++j) {
        const double lambda = spectra[i].eigenvalues[j];
        if (!spectra[i].trusted(j) || lambda < lo_cov || lambda >= hi_cov) continue;
        ++checked;
        if (!plans[i].covered(lambda)) {
          ok = false;
          coverage.witness = "eigenvalue " + fmt(lambda) + " at t = " + fmt(grid[i]) +
                             " escapes the localization union";
          break;
        }
      }
    }
    coverage.status = ok ? PredicateStatus::pass : PredicateStatus::fail;
    if (ok) coverage.witness = "checked " + std::to_string(checked) + " eigenvalues";
  }
  out.push_back(coverage);

  // 5. Principal block weights of satellite eigenvectors.
  PredicateResult weights =
      make("principal_weight",
           "eigenvectors in satellite k keep more than 2/3 of their norm in block k");
  if (!hermitian_ok || !plans_ok) {
    weights.witness = "prerequisite predicate failed";
  } else {
    bool ok = true;
    double min_weight = 1.0;
    for (size_t i = 0; i < grid.size() && ok; ++i) {
      for (const auto& [k, iv] : plans[i].satellites) {
        if (iv.lo < -spectra[i].trusted_bound || iv.hi > spectra[i].trusted_bound) continue;
        for (Eigen::Index j = 0; j < spectra[i].eigenvalues.size(); ++j) {
          if (!iv.contains(spectra[i].eigenvalues[j])) continue;
          const double w = spectra[i].weight(j, k);
          min_weight = std::min(min_weight, w);
          if (!(w > 2.0 / 3.0)) {
            ok = false;
            weights.witness = "weight " + fmt(w) + " in satellite " + std::to_string(k) +
                              " at t = " + fmt(grid[i]);
            break;
          }
        }
        if (!ok) break;
      }
    }
    weights.status = ok ? PredicateStatus::pass : PredicateStatus::fail;
    if (ok) weights.witness = "minimum principal weight " + fmt(min_weight);
  }
  out.push_back(weights);

  // 6. Small-norm refinement intervals (vacuous outside the regime).
  PredicateResult small_norm =
      make("small_norm_intervals",
           "in the small-norm regime each of the three refinement cores holds exactly m "
           "eigenvalues at every grid point");
  if (!whole_line_criterion(m_norm, n)) {
    small_norm.status = PredicateStatus::pass;
    small_norm.witness = "norm above the small-norm bound; nothing to check";
  } else if (!hermitian_ok || !plans_ok) {
    small_norm.witness = "prerequisite predicate failed";
  } else {
    bool ok = true;
    for (size_t i = 0; i < grid.size() && ok; ++i) {
      if (!plans[i].small_norm) continue;
      for (const Interval& iv : *plans[i].small_norm) {
        const int got = spectra[i].count_in(iv);
        if (got != m) {
          ok = false;
          small_norm.witness = "core " + iv.str() + " holds " + std::to_string(got) +
                               " eigenvalues at t = " + fmt(grid[i]);
          break;
        }
      }
    }
    small_norm.status = ok ? PredicateStatus::pass : PredicateStatus::fail;
    if (ok) small_norm.witness = "all cores hold exactly " + std::to_string(m) + " eigenvalues";
  }
  out.push_back(small_norm);

  // Band table shared by the band-side predicates.
  std::optional<BandTable> table;
  std::string table_issue;
  if (hermitian_ok && plans_ok && tallies_ok) {
    try {
      table = build_band_table(spec, grid, s_max, config.truncation);
    } catch (const std::exception& e) {
      table_issue = e.what();
    }
  } else {
    table_issue = "prerequisite predicate failed";
  }

  // 7. Band overlap intervals.
  PredicateResult overlap =
      make("band_overlap", "the guaranteed overlap interval of satellite k lies inside each of "
                           "its m band ranges on both sides");
  if (!table) {
    overlap.witness = table_issue;
  } else {
    const int k_lim = std::min(k_max, s_max / m - threshold);
    if (k_lim < threshold) {
      overlap.status = PredicateStatus::pass;
      overlap.witness = "band table too shallow to expose an overlap window; nothing to check";
    } else {
      bool ok = true;
      for (int k = threshold; k <= k_lim && ok; ++k) {
        const OverlapCheck check = check_overlap(*table, spec, m_norm, k);
        if (!check.ok) {
          ok = false;
          overlap.witness = "overlap interval escapes a band range at k = " + std::to_string(k);
        }
      }
      overlap.status = ok ? PredicateStatus::pass : PredicateStatus::fail;
      if (ok)
        overlap.witness = "checked k = " + std::to_string(threshold) + ".." + std::to_string(k_lim);
    }
  }
  out.push_back(overlap);

  // 8. Gap budget on two grid resolutions.
  PredicateResult gaps = make("gap_budget", "the number of confirmed spectral gaps inside the "
                                            "analysis window respects the bound m(2N-1)-1");
  if (!hermitian_ok || !plans_ok || !tallies_ok) {
    gaps.witness = "prerequisite predicate failed";
  } else {
    try {
      const GapReport report = detect_gaps_confirmed(spec, config.t_count, s_max,
                                                     config.truncation, config.min_gap_width_rel);
      gaps.status = report.within_bound ? PredicateStatus::pass : PredicateStatus::fail;
      std::ostringstream w;
      w << report.gap_count << " gaps against bound " << report.bound;
      if (report.gap_count > 0) w << ", narrowest " << fmt(report.min_gap_width);
      gaps.witness = w.str();
    } catch (const std::exception& e) {
      gaps.witness = e.what();
    }
  }
  out.push_back(gaps);

  // 9. Whole-line structure (vacuous outside the small-norm regime).
  PredicateResult whole_line =
      make("whole_line_structure", "in the small-norm regime the three refinement band groups "
                                   "contain their cores and chain up across the window");
  if (!whole_line_criterion(m_norm, n)) {
    whole_line.status = PredicateStatus::pass;
    whole_line.witness = "norm above the small-norm bound; nothing to check";
  } else if (!table) {
    whole_line.witness = table_issue;
  } else {
    const double slack = config.min_gap_width_rel * 2.0 * ipow(2.0 * kPi * threshold, n);
    const SmallNormStructure structure = check_small_m_structure(*table, spec, m_norm, slack);
    whole_line.status = structure.ok ? PredicateStatus::pass : PredicateStatus::fail;
    whole_line.witness = structure.ok ? "cores contained and groups chained" : structure.issue;
  }
  out.push_back(whole_line);

  // 10. Galerkin / winding count agreement.
  PredicateResult agreement =
      make("count_agreement", "boundary-phase winding counts match the Galerkin tallies on the "
                              "center band and satellites inside the integration window");
  if (!hermitian_ok || !plans_ok) {
    agreement.witness = "prerequisite predicate failed";
  } else {
    const std::vector<size_t> picks = {0, grid.size() / 2, grid.size() - 1};
    bool ok = true;
    int rectangles = 0;
    try {
      for (size_t i : picks) {
        const LocalizationPlan& plan = plans[i];
        const FiberSpectrum& spectrum = spectra[i];
        // Satellites are compared over their bracketing windows: the window
        // endpoints sit midway between the unperturbed frequencies, so the
        // contour never grazes an eigenvalue even for degenerate satellites.
        std::vector<std::pair<std::string, Interval>> targets;
        if (plan.center_band.lo >= -mono_window && plan.center_band.hi <= mono_window)
          targets.emplace_back("center band", plan.center_band);
        for (const auto& [k, iv] : plan.satellites) {
          const Interval window = plan.window(k);
          if (window.lo >= -mono_window && window.hi <= mono_window)
            targets.emplace_back("window of satellite " + std::to_string(k), window);
        }
        for (const auto& [label, iv] : targets) {
          const int from_galerkin = spectrum.count_in(iv);
          const double height = std::max(1.0, 0.25 * iv.width());
          const int from_winding =
              count_roots_in_interval(spec, grid[i], iv, height, 64, ode);
          ++rectangles;
          if (from_winding != from_galerkin) {
            ok = false;
            agreement.witness = label + " at t = " + fmt(grid[i]) + ": winding " +
                                std::to_string(from_winding) + " vs tally " +
                                std::to_string(from_galerkin);
            break;
          }
        }
        if (!ok) break;
      }
      agreement.status = ok ? PredicateStatus::pass : PredicateStatus::fail;
      if (ok)
        agreement.witness = "agreed on " + std::to_string(rectangles) + " rectangles at " +
                            std::to_string(picks.size()) + " grid points";
    } catch (const numerical_failure& e) {
      agreement.status = PredicateStatus::fail;
      agreement.witness = e.what();
    }
  }
  out.push_back(agreement);

  // 11. Truncation stability.
  PredicateResult stability =
      make("truncation_stability", "numbered eigenvalues move less than the stability tolerance "
                                   "when the truncation grows by 8");
  if (!hermitian_ok || !plans_ok || !tallies_ok) {
    stability.witness = "prerequisite predicate failed";
  } else {
    const size_t i = grid.size() / 2;
    const FiberSpectrum wider =
        solve_fiber(assemble_fiber_matrix(spec, grid[i], 1.0, k_trunc + 8,
                                          std::numeric_limits<double>::infinity()));
    const std::map<int, double> base = number_eigenvalues(spectra[i], plans[i]);
    const std::map<int, double> refined = number_eigenvalues(wider, plans[i]);
    double worst = 0.0;
    for (int s = 1; s <= s_max; ++s)
      for (int sign : {1, -1}) {
        const double a = base.at(sign * s);
        const double b = refined.at(sign * s);
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      }
    stability.status =
        worst <= config.stability_rel_tol ? PredicateStatus::pass : PredicateStatus::fail;
    stability.witness = "max relative shift " + fmt(worst) + " at t = " + fmt(grid[i]);
  }
  out.push_back(stability);

  summary.all_passed = true;
  for (const PredicateResult& p : summary.predicates)
    if (p.status != PredicateStatus::pass) summary.all_passed = false;
  return summary;
}

}  // namespace floquet
