#include "floquet/coeffs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "floquet/galerkin.hpp"
#include "floquet/numeric.hpp"

namespace floquet {

using json = nlohmann::ordered_json;

int FourierMatrixSeries::support_radius() const {
  int radius = 0;
  for (const auto& [c, term] : terms) radius = std::max(radius, std::abs(c));
  return radius;
}

Eigen::MatrixXcd FourierMatrixSeries::term(int c) const {
  auto it = terms.find(c);
  if (it != terms.end()) return it->second;
  return Eigen::MatrixXcd::Zero(dim, dim);
}

Eigen::MatrixXcd FourierMatrixSeries::evaluate(double x) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [c, t] : terms) {
    const double phase = 2.0 * kPi * c * x;
    out += t * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return out;
}

bool FourierMatrixSeries::hermitian_valued(double tol) const {
  double scale = 1.0;
  for (const auto& [c, t] : terms) scale = std::max(scale, t.norm());
  for (const auto& [c, t] : terms) {
    if ((t.adjoint() - term(-c)).norm() > tol * scale) return false;
  }
  return true;
}

int OperatorSpec::support_radius() const {
  int radius = 0;
  for (const auto& [v, series] : coefficients) radius = std::max(radius, series.support_radius());
  return radius;
}

const FourierMatrixSeries* OperatorSpec::coefficient(int v) const {
  auto it = coefficients.find(v);
  return it == coefficients.end() ? nullptr : &it->second;
}

void OperatorSpec::validate() const {
  if (n <= 1 || n % 2 == 0) throw invalid_input("order n must be odd and greater than 1");
  if (m < 2 || m % 2 != 0) throw invalid_input("system size m must be even and at least 2");
  for (const auto& [v, series] : coefficients) {
    if (v < 2 || v > n)
      throw invalid_input("coefficient index v=" + std::to_string(v) + " outside [2, n]");
    if (series.dim != m) throw invalid_input("coefficient blocks must be m x m");
    for (const auto& [c, term] : series.terms) {
      if (term.rows() != m || term.cols() != m)
        throw invalid_input("coefficient blocks must be m x m");
      if (!term.allFinite()) throw invalid_input("coefficient entries must be finite");
    }
  }
}

CoefficientNorm compute_m_norm(const OperatorSpec& spec) {
  CoefficientNorm out;
  for (const auto& [v, series] : spec.coefficients) {
    // Parseval: ||P_v u||^2 = u^H (sum_c T_c^H T_c) u, so the sup over unit u
    // is the largest eigenvalue of the (Hermitian PSD) Gram sum.
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(spec.m, spec.m);
    double entrywise = 0.0;
    for (const auto& [c, term] : series.terms) gram += term.adjoint() * term;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    const double top = std::max(0.0, es.eigenvalues().maxCoeff());
    for (int i = 0; i < spec.m; ++i) {
      for (int j = 0; j < spec.m; ++j) {
        double sq = 0.0;
        for (const auto& [c, term] : series.terms) sq += std::norm(term(i, j));
        entrywise += std::sqrt(sq);
      }
    }
    out.per_v[v] = std::sqrt(top);
    out.m_value += out.per_v[v];
    out.entrywise_bound += entrywise;
  }
  return out;
}

namespace {

[[noreturn]] void bad_spec(const std::string& detail) {
  throw invalid_input("operator spec: " + detail);
}

int require_int(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number_integer())
    bad_spec(std::string("missing integer field '") + key + "'");
  return node[key].get<int>();
}

double require_num(const json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number())
    bad_spec(std::string("missing numeric field '") + key + "'");
  return node[key].get<double>();
}

}  // namespace

OperatorSpec load_operator_spec(const std::string& json_text) {
  json root = json::parse(json_text, nullptr, false);
  if (root.is_discarded()) bad_spec("malformed JSON");
  if (!root.is_object()) bad_spec("top level must be an object");

  OperatorSpec spec;
  spec.n = require_int(root, "n");
  spec.m = require_int(root, "m");
  if (root.contains("coefficients")) {
    if (!root["coefficients"].is_array()) bad_spec("'coefficients' must be a list");
    for (const auto& coeff : root["coefficients"]) {
      const int v = require_int(coeff, "v");
      if (spec.coefficients.count(v)) bad_spec("duplicate coefficient v=" + std::to_string(v));
      FourierMatrixSeries series;
      series.dim = spec.m;
      if (!coeff.contains("entries") || !coeff["entries"].is_array())
        bad_spec("coefficient v=" + std::to_string(v) + " needs an 'entries' list");
      for (const auto& entry : coeff["entries"]) {
        const int i = require_int(entry, "i");
        const int j = require_int(entry, "j");
        if (i < 1 || i > spec.m || j < 1 || j > spec.m)
          bad_spec("entry indices are 1-based and bounded by m");
        if (!entry.contains("harmonics") || !entry["harmonics"].is_array())
          bad_spec("entry needs a 'harmonics' list");
        for (const auto& h : entry["harmonics"]) {
          const int c = require_int(h, "c");
          const double re = require_num(h, "re");
          const double im = require_num(h, "im");
          auto& term = series.terms.try_emplace(c, Eigen::MatrixXcd::Zero(spec.m, spec.m))
                           .first->second;
          term(i - 1, j - 1) += std::complex<double>(re, im);
        }
      }
      spec.coefficients.emplace(v, std::move(series));
    }
  }
  spec.validate();
  return spec;
}

OperatorSpec load_operator_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open spec file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_operator_spec(buffer.str());
}

std::string operator_spec_to_json(const OperatorSpec& spec) {
  json root;
  root["n"] = spec.n;
  root["m"] = spec.m;
  root["coefficients"] = json::array();
  for (const auto& [v, series] : spec.coefficients) {
    json coeff;
    coeff["v"] = v;
    coeff["entries"] = json::array();
    for (int i = 0; i < spec.m; ++i) {
      for (int j = 0; j < spec.m; ++j) {
        json harmonics = json::array();
        for (const auto& [c, term] : series.terms) {
          const std::complex<double> z = term(i, j);
          if (z == std::complex<double>(0.0, 0.0)) continue;
          harmonics.push_back({{"c", c}, {"re", z.real()}, {"im", z.imag()}});
        }
        if (!harmonics.empty())
          coeff["entries"].push_back(
              {{"i", i + 1}, {"j", j + 1}, {"harmonics", std::move(harmonics)}});
      }
    }
    root["coefficients"].push_back(std::move(coeff));
  }
  return root.dump(2) + "\n";
}

void save_operator_spec_file(const OperatorSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot write spec file: " + path);
  out << operator_spec_to_json(spec);
}

SelfAdjointnessReport check_formal_self_adjointness(const OperatorSpec& spec,
                                                    std::span<const double> t_samples,
                                                    int truncation, double tol) {
  SelfAdjointnessReport report;
  report.tolerance = tol;
  const double inf = std::numeric_limits<double>::infinity();
  for (double t : t_samples) {
    const FiberMatrix fiber = assemble_fiber_matrix(spec, t, 1.0, truncation, inf);
    report.max_relative_deviation =
        std::max(report.max_relative_deviation, fiber.hermitian_deviation);
  }
  report.self_adjoint = report.max_relative_deviation <= tol;
  return report;
}

}  // namespace floquet
