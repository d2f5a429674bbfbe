#include "floquet/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "floquet/errors.hpp"

namespace floquet {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_config(const std::string& message) {
  throw invalid_input("run config: " + message);
}

double as_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad_config("key '" + key + "' must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad_config("key '" + key + "' must be an integer");
  return j.get<int>();
}

}  // namespace

RunConfig load_run_config(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) bad_config("not valid JSON");
  if (!root.is_object()) bad_config("top level must be an object");

  RunConfig config;
  for (const auto& [key, value] : root.items()) {
    if (key == "spec_path") {
      if (!value.is_string()) bad_config("key 'spec_path' must be a string");
      config.spec_path = value.get<std::string>();
    } else if (key == "output_dir") {
      if (!value.is_string()) bad_config("key 'output_dir' must be a string");
      config.output_dir = value.get<std::string>();
    } else if (key == "truncation") {
      config.truncation = as_int(value, key);
    } else if (key == "t_count") {
      config.t_count = as_int(value, key);
    } else if (key == "s_max") {
      config.s_max = as_int(value, key);
    } else if (key == "k_max") {
      config.k_max = as_int(value, key);
    } else if (key == "hermitian_tol") {
      config.hermitian_tol = as_number(value, key);
    } else if (key == "require_self_adjoint") {
      if (!value.is_boolean()) bad_config("key 'require_self_adjoint' must be a boolean");
      config.require_self_adjoint = value.get<bool>();
    } else if (key == "ode_abs_tol") {
      config.ode_abs_tol = as_number(value, key);
    } else if (key == "ode_rel_tol") {
      config.ode_rel_tol = as_number(value, key);
    } else if (key == "stability_rel_tol") {
      config.stability_rel_tol = as_number(value, key);
    } else if (key == "monodromy_window") {
      config.monodromy_window = as_number(value, key);
    } else if (key == "min_gap_width_rel") {
      config.min_gap_width_rel = as_number(value, key);
    } else if (key == "det_lo") {
      config.det_lo = as_number(value, key);
    } else if (key == "det_hi") {
      config.det_hi = as_number(value, key);
    } else if (key == "det_t") {
      config.det_t = as_number(value, key);
    } else if (key == "det_samples") {
      config.det_samples = as_int(value, key);
    } else {
      bad_config("unknown key '" + key + "'");
    }
  }

  if (config.t_count < 1) bad_config("t_count must be positive");
  if (config.truncation < 0) bad_config("truncation must be nonnegative");
  if (config.s_max < 0) bad_config("s_max must be nonnegative");
  if (config.k_max < 0) bad_config("k_max must be nonnegative");
  if (!(config.hermitian_tol >= 0.0)) bad_config("hermitian_tol must be nonnegative");
  if (!(config.ode_abs_tol > 0.0) || !(config.ode_rel_tol > 0.0))
    bad_config("ode tolerances must be positive");
  if (!(config.stability_rel_tol > 0.0)) bad_config("stability_rel_tol must be positive");
  if (config.monodromy_window < 0.0) bad_config("monodromy_window must be nonnegative");
  if (!(config.min_gap_width_rel >= 0.0)) bad_config("min_gap_width_rel must be nonnegative");
  if (config.det_samples < 0) bad_config("det_samples must be nonnegative");
  return config;
}

RunConfig load_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open run config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_run_config(buffer.str());
}

std::string run_config_to_json(const RunConfig& config) {
  json root;
  root["spec_path"] = config.spec_path;
  root["output_dir"] = config.output_dir;
  root["truncation"] = config.truncation;
  root["t_count"] = config.t_count;
  root["s_max"] = config.s_max;
  root["k_max"] = config.k_max;
  root["hermitian_tol"] = config.hermitian_tol;
  root["require_self_adjoint"] = config.require_self_adjoint;
  root["ode_abs_tol"] = config.ode_abs_tol;
  root["ode_rel_tol"] = config.ode_rel_tol;
  root["stability_rel_tol"] = config.stability_rel_tol;
  root["monodromy_window"] = config.monodromy_window;
  root["min_gap_width_rel"] = config.min_gap_width_rel;
  root["det_lo"] = config.det_lo;
  root["det_hi"] = config.det_hi;
  root["det_t"] = config.det_t;
  root["det_samples"] = config.det_samples;
  return root.dump(2) + "\n";
}

void write_effective_config(const RunConfig& config) {
  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path path =
      std::filesystem::path(config.output_dir) / "effective_config.json";
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write " + path.string());
  out << run_config_to_json(config);
}

}  // namespace floquet
