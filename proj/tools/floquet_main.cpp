#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "floquet/cli.hpp"
#include "floquet/errors.hpp"
#include "floquet/runconfig.hpp"

namespace {

struct Flags {
  std::string config_path;
  floquet::RunConfig values;
  CLI::Option* spec = nullptr;
  CLI::Option* output_dir = nullptr;
  CLI::Option* truncation = nullptr;
  CLI::Option* t_count = nullptr;
  CLI::Option* s_max = nullptr;
  CLI::Option* k_max = nullptr;
  CLI::Option* hermitian_tol = nullptr;
  CLI::Option* require_self_adjoint = nullptr;
  CLI::Option* ode_abs_tol = nullptr;
  CLI::Option* ode_rel_tol = nullptr;
  CLI::Option* stability_rel_tol = nullptr;
  CLI::Option* monodromy_window = nullptr;
  CLI::Option* min_gap_width_rel = nullptr;
  CLI::Option* det_lo = nullptr;
  CLI::Option* det_hi = nullptr;
  CLI::Option* det_t = nullptr;
  CLI::Option* det_samples = nullptr;
};

void add_common(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "run configuration JSON file");
  flags.spec = cmd->add_option("--spec", flags.values.spec_path, "operator JSON file");
  flags.output_dir = cmd->add_option("--output-dir", flags.values.output_dir, "report directory");
  flags.truncation = cmd->add_option("--truncation", flags.values.truncation,
                                     "basis truncation (0: derive)");
  flags.t_count = cmd->add_option("--t-count", flags.values.t_count, "quasimomentum grid size");
  flags.s_max = cmd->add_option("--s-max", flags.values.s_max, "deepest band index (0: derive)");
  flags.k_max = cmd->add_option("--k-max", flags.values.k_max, "deepest satellite (0: derive)");
  flags.hermitian_tol =
      cmd->add_option("--hermitian-tol", flags.values.hermitian_tol, "fiber Hermitian tolerance");
  flags.require_self_adjoint = cmd->add_flag("--require-self-adjoint",
                                             flags.values.require_self_adjoint,
                                             "reject operators that fail the Hermitian check");
  flags.ode_abs_tol =
      cmd->add_option("--ode-abs-tol", flags.values.ode_abs_tol, "integrator absolute tolerance");
  flags.ode_rel_tol =
      cmd->add_option("--ode-rel-tol", flags.values.ode_rel_tol, "integrator relative tolerance");
  flags.stability_rel_tol = cmd->add_option("--stability-rel-tol", flags.values.stability_rel_tol,
                                            "truncation stability tolerance");
  flags.monodromy_window = cmd->add_option("--monodromy-window", flags.values.monodromy_window,
                                           "largest |lambda| handed to the integrator (0: derive)");
  flags.min_gap_width_rel = cmd->add_option("--min-gap-width-rel", flags.values.min_gap_width_rel,
                                            "gap width floor relative to the window");
  flags.det_lo = cmd->add_option("--det-lo", flags.values.det_lo, "determinant window low end");
  flags.det_hi = cmd->add_option("--det-hi", flags.values.det_hi, "determinant window high end");
  flags.det_t = cmd->add_option("--det-t", flags.values.det_t, "determinant quasimomentum");
  flags.det_samples =
      cmd->add_option("--det-samples", flags.values.det_samples, "determinant samples (0: derive)");
}

floquet::RunConfig resolve(const Flags& flags) {
  floquet::RunConfig config;
  if (!flags.config_path.empty()) config = floquet::load_run_config_file(flags.config_path);
  if (flags.spec->count()) config.spec_path = flags.values.spec_path;
  if (flags.output_dir->count()) config.output_dir = flags.values.output_dir;
  if (flags.truncation->count()) config.truncation = flags.values.truncation;
  if (flags.t_count->count()) config.t_count = flags.values.t_count;
  if (flags.s_max->count()) config.s_max = flags.values.s_max;
  if (flags.k_max->count()) config.k_max = flags.values.k_max;
  if (flags.hermitian_tol->count()) config.hermitian_tol = flags.values.hermitian_tol;
  if (flags.require_self_adjoint->count())
    config.require_self_adjoint = flags.values.require_self_adjoint;
  if (flags.ode_abs_tol->count()) config.ode_abs_tol = flags.values.ode_abs_tol;
  if (flags.ode_rel_tol->count()) config.ode_rel_tol = flags.values.ode_rel_tol;
  if (flags.stability_rel_tol->count()) config.stability_rel_tol = flags.values.stability_rel_tol;
  if (flags.monodromy_window->count()) config.monodromy_window = flags.values.monodromy_window;
  if (flags.min_gap_width_rel->count())
    config.min_gap_width_rel = flags.values.min_gap_width_rel;
  if (flags.det_lo->count()) config.det_lo = flags.values.det_lo;
  if (flags.det_hi->count()) config.det_hi = flags.values.det_hi;
  if (flags.det_t->count()) config.det_t = flags.values.det_t;
  if (flags.det_samples->count()) config.det_samples = flags.values.det_samples;

  // Round-trip through the validator so flag values obey the same ranges.
  return floquet::load_run_config(floquet::run_config_to_json(config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis of periodic matrix differential operators"};
  app.require_subcommand(1);

  Flags norm_flags, localize_flags, bands_flags, gaps_flags, verify_flags, det_flags;
  CLI::App* norm = app.add_subcommand("norm", "coefficient norm and derived thresholds");
  add_common(norm, norm_flags);
  CLI::App* localize = app.add_subcommand("localize", "eigenvalue localization intervals");
  add_common(localize, localize_flags);
  CLI::App* bands = app.add_subcommand("bands", "band functions over the quasimomentum grid");
  add_common(bands, bands_flags);
  CLI::App* gaps = app.add_subcommand("gaps", "spectral gaps against the budget");
  add_common(gaps, gaps_flags);
  CLI::App* verify = app.add_subcommand("verify", "full predicate suite");
  add_common(verify, verify_flags);
  CLI::App* determinant =
      app.add_subcommand("determinant", "characteristic determinant along the real axis");
  add_common(determinant, det_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (norm->parsed()) return floquet::cmd_norm(resolve(norm_flags), std::cout);
    if (localize->parsed()) return floquet::cmd_localize(resolve(localize_flags), std::cout);
    if (bands->parsed()) return floquet::cmd_bands(resolve(bands_flags), std::cout);
    if (gaps->parsed()) return floquet::cmd_gaps(resolve(gaps_flags), std::cout);
    if (verify->parsed()) return floquet::cmd_verify(resolve(verify_flags), std::cout);
    if (determinant->parsed()) return floquet::cmd_determinant(resolve(det_flags), std::cout);
  } catch (const floquet::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const floquet::numerical_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const floquet::structural_failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
