#pragma once

#include <string>

namespace floquet {

// Run parameters shared by the command entry points. Zero means "derive a
// default from the operator" where noted.
struct RunConfig {
  std::string spec_path;
  std::string output_dir = ".";

  int truncation = 0;       // 0: default_truncation(...)
  int t_count = 17;         // uniform grid over (-1, 1]
  int s_max = 0;            // 0: (k_max - threshold + 1) * m
  int k_max = 0;            // 0: threshold + 4
  double hermitian_tol = 1e-10;
  bool require_self_adjoint = false;  // escalate the advisory check to a hard input error

  double ode_abs_tol = 1e-10;
  double ode_rel_tol = 1e-10;
  double stability_rel_tol = 1e-8;  // truncation-stability verdicts
  double monodromy_window = 0.0;    // 0: (6 pi)^n
  double min_gap_width_rel = 1e-4;

  // determinant command
  double det_lo = 0.0;
  double det_hi = 0.0;  // lo == hi: derive a window from the plan
  double det_t = 0.5;
  int det_samples = 0;  // 0: 64 per unperturbed eigenvalue spacing
};

// JSON round-trip. Unknown keys are rejected so typos fail loudly.
RunConfig load_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

// Every command echoes the fully resolved configuration next to its outputs.
void write_effective_config(const RunConfig& config);

}  // namespace floquet
