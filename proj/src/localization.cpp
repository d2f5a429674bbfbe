#include "floquet/localization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "floquet/numeric.hpp"

namespace floquet {

int compute_threshold(double m_norm) {
  if (!(m_norm >= 0.0) || !std::isfinite(m_norm))
    throw invalid_input("coefficient norm must be finite and nonnegative");
  return static_cast<int>(std::ceil(m_norm / (kPi * kPi) + 1.0));
}

double delta_radius(int k, double t, int n, double m_norm) {
  return 1.5 * ipow(kPi, n - 2) * m_norm * std::pow(std::abs(2.0 * k + t), n - 2);
}

bool whole_line_criterion(double m_norm, int n) {
  return m_norm <= kPi * kPi * std::pow(2.0, -n + 0.5);
}

int effective_threshold(double m_norm, int n) {
  const int threshold = compute_threshold(m_norm);
  if (whole_line_criterion(m_norm, n)) return std::max(threshold, 2);
  return threshold;
}

int gap_count_bound(int m, int threshold) { return m * (2 * threshold - 1) - 1; }

namespace {

Interval satellite_interval(int k, double t, int n, double m_norm) {
  const double center = free_eigenvalue(k, t, n);
  const double radius = delta_radius(k, t, n, m_norm);
  if (radius == 0.0) {
    // Degenerate satellite: a single point, padded by a relative 1e-9 so that
    // eigensolver roundoff cannot push the computed copies outside.
    const double pad = 1e-9 * std::max(1.0, std::abs(center));
    return Interval::closed(center - pad, center + pad);
  }
  return Interval::open(center - radius, center + radius);
}

}  // namespace

std::pair<Interval, Interval> overlap_intervals(int threshold, int n, double m_norm, int k) {
  if (k < threshold)
    throw invalid_input("overlap intervals exist only for k at or above the threshold");
  Interval pos = Interval::open(ipow(2.0 * kPi * k - kPi, n) + delta_radius(k, -1.0, n, m_norm),
                                ipow(2.0 * kPi * k + kPi, n) - delta_radius(k, 1.0, n, m_norm));
  Interval neg =
      Interval::open(ipow(-2.0 * kPi * k - kPi, n) + delta_radius(-k, -1.0, n, m_norm),
                     ipow(-2.0 * kPi * k + kPi, n) - delta_radius(-k, 1.0, n, m_norm));
  return {pos, neg};
}

Interval LocalizationPlan::window(int k) const {
  return Interval::half_open(ipow(block_frequency(k, t) - kPi, n),
                             ipow(block_frequency(k, t) + kPi, n));
}

bool LocalizationPlan::covered(double lambda) const {
  if (center_band.contains(lambda)) return true;
  for (const auto& [k, iv] : satellites) {
    if (iv.contains(lambda)) return true;
  }
  return false;
}

LocalizationPlan build_localization_plan(const OperatorSpec& spec, double m_norm, double t,
                                         int k_max) {
  if (t <= -1.0 || t > 1.0) throw invalid_input("quasimomentum t must lie in (-1, 1]");
  LocalizationPlan plan;
  plan.t = t;
  plan.n = spec.n;
  plan.m = spec.m;
  plan.m_norm = m_norm;
  plan.threshold = effective_threshold(m_norm, spec.n);
  if (k_max < plan.threshold) throw invalid_input("k_max must reach the threshold");
  plan.k_max = k_max;

  const int n = spec.n;
  const int N = plan.threshold;
  plan.center_band = Interval::half_open(ipow(-2.0 * kPi * N + kPi + kPi * t, n),
                                         ipow(2.0 * kPi * N - kPi + kPi * t, n));
  plan.boundary_gap = Interval::half_open(
      ipow(2.0 * kPi * N - kPi + kPi * t, n),
      free_eigenvalue(N, t, n) - delta_radius(N, t, n, m_norm));

  for (int k = N; k <= k_max; ++k) {
    plan.satellites[k] = satellite_interval(k, t, n, m_norm);
    plan.satellites[-k] = satellite_interval(-k, t, n, m_norm);
  }
  for (int k = N; k < k_max; ++k) {
    plan.gaps_between[k] =
        Interval::closed(free_eigenvalue(k, t, n) + delta_radius(k, t, n, m_norm),
                         free_eigenvalue(k + 1, t, n) - delta_radius(k + 1, t, n, m_norm));
    plan.gaps_between[-k - 1] =
        Interval::closed(free_eigenvalue(-k - 1, t, n) + delta_radius(-k - 1, t, n, m_norm),
                         free_eigenvalue(-k, t, n) - delta_radius(-k, t, n, m_norm));
  }

  if (whole_line_criterion(m_norm, n)) {
    const double core = kPi * t;
    const double fifth = ipow(kPi, n) / 5.0;
    Interval mid = Interval::open(ipow(core, n) - fifth, ipow(core, n) + fifth);
    const double rad_pos = 0.3 * std::pow(std::abs(2.0 + t), n - 2) * ipow(kPi, n);
    const double rad_neg = 0.3 * std::pow(std::abs(t - 2.0), n - 2) * ipow(kPi, n);
    Interval pos = Interval::open(ipow(2.0 * kPi + core, n) - rad_pos,
                                  ipow(2.0 * kPi + core, n) + rad_pos);
    Interval neg = Interval::open(ipow(core - 2.0 * kPi, n) - rad_neg,
                                  ipow(core - 2.0 * kPi, n) + rad_neg);
    plan.small_norm = {neg, mid, pos};
  }

  // Zero-slack disjointness over the whole family. Satellites must avoid each
  // other and the center band; the small-norm triple must avoid itself and the
  // satellites (it refines the center band, which it legitimately meets).
  std::vector<std::pair<int, Interval>> family;
  family.emplace_back(0, plan.center_band);  // id 0: center band
  for (const auto& [k, iv] : plan.satellites) family.emplace_back(k, iv);
  for (size_t a = 0; a < family.size(); ++a) {
    for (size_t b = a + 1; b < family.size(); ++b) {
      if (!disjoint(family[a].second, family[b].second))
        throw disjointness_error("localization intervals overlap at t=" + std::to_string(t) +
                                     ": " + family[a].second.str() + " and " +
                                     family[b].second.str(),
                                 family[a].first, family[b].first);
    }
  }
  if (plan.small_norm) {
    const auto& triple = *plan.small_norm;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        if (!disjoint(triple[a], triple[b]))
          throw disjointness_error("small-norm core intervals overlap at t=" + std::to_string(t),
                                   a - 1, b - 1);
      }
      for (const auto& [k, iv] : plan.satellites) {
        if (!disjoint(triple[a], iv))
          throw disjointness_error(
              "small-norm interval overlaps satellite at t=" + std::to_string(t), a - 1, k);
      }
    }
  }
  return plan;
}

}  // namespace floquet
