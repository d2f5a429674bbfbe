#include "floquet/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "floquet/bands.hpp"
#include "floquet/errors.hpp"
#include "floquet/galerkin.hpp"
#include "floquet/localization.hpp"
#include "floquet/monodromy.hpp"
#include "floquet/numeric.hpp"
#include "floquet/verification.hpp"

namespace floquet {

using json = nlohmann::ordered_json;

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

OperatorSpec load_spec_checked(const RunConfig& config) {
  if (config.spec_path.empty()) throw invalid_input("no operator file given");
  OperatorSpec spec = load_operator_spec_file(config.spec_path);
  if (config.require_self_adjoint) {
    const int k = default_truncation(spec, 1, 1, 0);
    const FiberMatrix probe =
        assemble_fiber_matrix(spec, 1.0, 1.0, k, std::numeric_limits<double>::infinity());
    if (probe.hermitian_deviation > config.hermitian_tol)
      throw invalid_input("operator is not formally self-adjoint: fiber deviation " +
                          format_number(probe.hermitian_deviation));
  }
  return spec;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  const auto path = std::filesystem::path(config.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write " + path.string());
  return out;
}

json interval_json(const Interval& iv) {
  json j;
  j["lo"] = iv.lo;
  j["hi"] = iv.hi;
  j["closed_lo"] = iv.closed_lo;
  j["closed_hi"] = iv.closed_hi;
  return j;
}

int resolved_k_max(const RunConfig& config, int threshold) {
  const int k_max = config.k_max > 0 ? config.k_max : threshold + 4;
  if (k_max < threshold) throw invalid_input("k_max must be at least the localization threshold");
  return k_max;
}

int resolved_s_max(const RunConfig& config, int threshold, int k_max, int m) {
  return config.s_max > 0 ? config.s_max : (k_max - threshold + 1) * m;
}

}  // namespace

int cmd_norm(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const CoefficientNorm norm = compute_m_norm(spec);
  const int threshold = effective_threshold(norm.m_value, spec.n);

  std::string csv = "quantity,value\n";
  csv += "m_norm," + format_number(norm.m_value) + "\n";
  csv += "entrywise_bound," + format_number(norm.entrywise_bound) + "\n";
  for (const auto& [v, value] : norm.per_v)
    csv += "per_norm_v" + std::to_string(v) + "," + format_number(value) + "\n";
  csv += "threshold," + std::to_string(threshold) + "\n";
  csv += std::string("whole_line_criterion,") +
         (whole_line_criterion(norm.m_value, spec.n) ? "true" : "false") + "\n";
  csv += "gap_count_bound," + std::to_string(gap_count_bound(spec.m, threshold)) + "\n";

  write_effective_config(config);
  open_output(config, "norm.csv") << csv;
  out << csv;
  return 0;
}

int cmd_localize(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const CoefficientNorm norm = compute_m_norm(spec);
  const int threshold = effective_threshold(norm.m_value, spec.n);
  const int k_max = resolved_k_max(config, threshold);
  const std::vector<double> grid = make_t_grid(config.t_count);

  json root;
  root["m_norm"] = norm.m_value;
  root["threshold"] = threshold;
  root["k_max"] = k_max;
  root["gap_count_bound"] = gap_count_bound(spec.m, threshold);
  root["whole_line_criterion"] = whole_line_criterion(norm.m_value, spec.n);
  root["plans"] = json::array();
  for (double t : grid) {
    const LocalizationPlan plan = build_localization_plan(spec, norm.m_value, t, k_max);
    json entry;
    entry["t"] = t;
    entry["center_band"] = interval_json(plan.center_band);
    entry["boundary_gap"] = interval_json(plan.boundary_gap);
    json satellites = json::object();
    for (const auto& [k, iv] : plan.satellites) satellites[std::to_string(k)] = interval_json(iv);
    entry["satellites"] = satellites;
    if (plan.small_norm) {
      entry["small_norm"] = json::array();
      for (const Interval& iv : *plan.small_norm) entry["small_norm"].push_back(interval_json(iv));
    }
    root["plans"].push_back(entry);
  }

  write_effective_config(config);
  open_output(config, "localization.json") << root.dump(2) << "\n";
  out << "localization plan over " << grid.size() << " grid points, |k| <= " << k_max
      << ", threshold " << threshold << "\n";
  return 0;
}

int cmd_bands(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const CoefficientNorm norm = compute_m_norm(spec);
  const int threshold = effective_threshold(norm.m_value, spec.n);
  const int k_max = resolved_k_max(config, threshold);
  const int s_max = resolved_s_max(config, threshold, k_max, spec.m);
  const std::vector<double> grid = make_t_grid(config.t_count);
  const BandTable table = build_band_table(spec, grid, s_max, config.truncation);

  std::string csv = "t";
  for (int s = -s_max; s <= s_max; ++s)
    if (s != 0) csv += ",s_" + std::to_string(s);
  csv += "\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    csv += format_number(grid[i]);
    for (int s = -s_max; s <= s_max; ++s)
      if (s != 0) csv += "," + format_number(table.bands.at(s)[i]);
    csv += "\n";
  }

  write_effective_config(config);
  open_output(config, "band_table.csv") << csv;
  out << "band table: " << 2 * s_max << " bands over " << grid.size() << " grid points\n";
  for (int s = 1; s <= std::min(s_max, 3); ++s) {
    out << "band " << s << " range " << table.band_range(s).str() << ", band " << -s << " range "
        << table.band_range(-s).str() << "\n";
  }
  return 0;
}

int cmd_gaps(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const CoefficientNorm norm = compute_m_norm(spec);
  const int threshold = effective_threshold(norm.m_value, spec.n);
  const int k_max = resolved_k_max(config, threshold);
  const int s_max = resolved_s_max(config, threshold, k_max, spec.m);
  const GapReport report = detect_gaps_confirmed(spec, config.t_count, s_max, config.truncation,
                                                 config.min_gap_width_rel);

  json root;
  root["window"] = report.window;
  root["bound"] = report.bound;
  root["gap_count"] = report.gap_count;
  root["within_bound"] = report.within_bound;
  root["whole_line_criterion"] = report.whole_line;
  root["min_gap_width"] = report.min_gap_width;
  root["gaps"] = json::array();
  for (const Interval& gap : report.gaps) root["gaps"].push_back(interval_json(gap));

  write_effective_config(config);
  open_output(config, "gap_report.json") << root.dump(2) << "\n";
  out << report.gap_count << " confirmed gaps in [" << format_number(-report.window) << ", "
      << format_number(report.window) << "], bound " << report.bound << "\n";
  for (const Interval& gap : report.gaps) out << "gap " << gap.str() << "\n";
  return report.within_bound ? 0 : 1;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const VerificationSummary summary = run_verification(spec, config);

  json root;
  root["all_passed"] = summary.all_passed;
  root["predicates"] = json::array();
  for (const PredicateResult& p : summary.predicates) {
    json entry;
    entry["name"] = p.name;
    entry["claim"] = p.claim;
    entry["status"] = to_string(p.status);
    entry["witness"] = p.witness;
    root["predicates"].push_back(entry);
  }

  write_effective_config(config);
  open_output(config, "verification.json") << root.dump(2) << "\n";
  for (const PredicateResult& p : summary.predicates) {
    const char* tag = p.status == PredicateStatus::pass
                          ? "[PASS]"
                          : (p.status == PredicateStatus::fail ? "[FAIL]" : "[SKIP]");
    out << tag << " " << p.name << ": " << p.witness << "\n";
  }
  out << (summary.all_passed ? "all predicates passed" : "verification failed") << "\n";
  return summary.all_passed ? 0 : 1;
}

int cmd_determinant(const RunConfig& config, std::ostream& out) {
  const OperatorSpec spec = load_spec_checked(config);
  const CoefficientNorm norm = compute_m_norm(spec);
  const int threshold = effective_threshold(norm.m_value, spec.n);
  const double mono_window =
      config.monodromy_window > 0.0 ? config.monodromy_window : ipow(6.0 * kPi, spec.n);

  double lo = config.det_lo;
  double hi = config.det_hi;
  if (lo == hi) {
    hi = ipow(2.0 * kPi * threshold + kPi, spec.n);
    lo = -hi;
  }
  if (!(lo < hi)) throw invalid_input("determinant window is empty");
  if (std::max(std::abs(lo), std::abs(hi)) > mono_window)
    throw invalid_input("determinant window exceeds the integration window " +
                        format_number(mono_window));
  const double t = config.det_t;
  if (!(t > -1.0 && t <= 1.0)) throw invalid_input("determinant t must lie in (-1, 1]");

  const double s_lo = signed_root(lo, spec.n);
  const double s_hi = signed_root(hi, spec.n);
  const int samples =
      config.det_samples > 0
          ? config.det_samples
          : 64 * std::max(1, static_cast<int>(std::ceil((s_hi - s_lo) / (2.0 * kPi))));

  OdeOptions ode;
  ode.abs_tol = config.ode_abs_tol;
  ode.rel_tol = config.ode_rel_tol;

  std::string csv = "s,lambda,re_delta,im_delta,abs_delta,normalized\n";
  double min_normalized = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = s_lo + (s_hi - s_lo) * i / (samples - 1);
    const double lambda = ipow(s, spec.n);
    const std::complex<double> delta = characteristic_determinant(spec, {lambda, 0.0}, t, ode);
    const double envelope = characteristic_envelope(spec.n, spec.m, {lambda, 0.0});
    const double normalized = std::abs(delta) / envelope;
    min_normalized = std::min(min_normalized, normalized);
    csv += format_number(s) + "," + format_number(lambda) + "," + format_number(delta.real()) +
           "," + format_number(delta.imag()) + "," + format_number(std::abs(delta)) + "," +
           format_number(normalized) + "\n";
  }

  write_effective_config(config);
  open_output(config, "determinant.csv") << csv;
  out << samples << " determinant samples at t = " << format_number(t) << " over ["
      << format_number(lo) << ", " << format_number(hi) << "], smallest normalized magnitude "
      << format_number(min_normalized) << "\n";
  return 0;
}

}  // namespace floquet
