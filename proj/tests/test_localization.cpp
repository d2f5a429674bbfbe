#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/localization.hpp"
#include "floquet/numeric.hpp"
#include "support.hpp"

using namespace floquet;
using testsupport::cosine_spec;
using testsupport::free_spec;

TEST_CASE("threshold formula") {
  CHECK(compute_threshold(0.0) == 1);
  CHECK(compute_threshold(1.0) == 2);
  CHECK(compute_threshold(kPi * kPi) == 2);  // lands exactly on an integer
  CHECK(compute_threshold(2.0 * kPi * kPi) == 3);
  CHECK(compute_threshold(15.0) == 3);

  CHECK(effective_threshold(0.0, 3) == 2);
  CHECK(effective_threshold(1.0, 3) == 2);
  CHECK(effective_threshold(kPi * kPi, 3) == 2);
  CHECK(effective_threshold(2.0 * kPi * kPi, 3) == 3);
}

TEST_CASE("satellite radius") {
  CHECK(delta_radius(1, 1.0, 3, kPi * kPi) ==
        doctest::Approx(139.52824506134917).epsilon(1e-14));
  CHECK(delta_radius(1, -1.0, 3, 1.0) == doctest::Approx(4.71238898038469).epsilon(1e-14));
  CHECK(delta_radius(2, 0.0, 3, 1.0) == doctest::Approx(18.84955592153876).epsilon(1e-14));
  CHECK(delta_radius(-2, 0.0, 3, 1.0) == doctest::Approx(18.84955592153876).epsilon(1e-14));
  CHECK(delta_radius(2, 0.0, 3, 0.0) == 0.0);
}

TEST_CASE("whole-line criterion at the boundary") {
  CHECK(whole_line_criterion(0.0, 3));
  CHECK(whole_line_criterion(1.0, 3));
  CHECK(whole_line_criterion(1.7447, 3));
  CHECK_FALSE(whole_line_criterion(1.7448, 3));
  CHECK_FALSE(whole_line_criterion(2.0, 3));
  CHECK_FALSE(whole_line_criterion(kPi * kPi, 3));
}

TEST_CASE("gap count bound") {
  CHECK(gap_count_bound(2, 2) == 5);
  CHECK(gap_count_bound(2, 1) == 1);
  CHECK(gap_count_bound(4, 3) == 19);
}

TEST_CASE("overlap intervals") {
  const auto [pos, neg] = overlap_intervals(2, 3, kPi * kPi, 2);
  CHECK(pos.lo == doctest::Approx(976.6977154294442).epsilon(1e-14));
  CHECK(pos.hi == doctest::Approx(3643.2375099352284).epsilon(1e-14));
  CHECK_FALSE(pos.closed_lo);
  CHECK_FALSE(pos.closed_hi);
  CHECK(neg.lo == doctest::Approx(-3643.2375099352284).epsilon(1e-14));
  CHECK(neg.hi == doctest::Approx(-976.6977154294442).epsilon(1e-14));

  const auto [upos, uneg] = overlap_intervals(2, 3, 1.0, 2);
  CHECK(upos.lo == doctest::Approx(851.3066373092491).epsilon(1e-14));
  CHECK(upos.hi == doctest::Approx(3852.2226401355533).epsilon(1e-14));

  CHECK_THROWS_AS(overlap_intervals(2, 3, kPi * kPi, 1), invalid_input);

  // With a huge norm relative to the threshold the radii swallow the core.
  const auto [vpos, vneg] = overlap_intervals(1, 3, 100.0, 1);
  CHECK(vpos.empty());
  CHECK(vneg.empty());
}

TEST_CASE("plan intervals for the pi^2 cosine example") {
  const OperatorSpec spec = cosine_spec(kPi * kPi);
  const double m_norm = compute_m_norm(spec).m_value;

  const LocalizationPlan at0 = build_localization_plan(spec, m_norm, 0.0, 4);
  CHECK(at0.threshold == 2);
  const Interval& b2 = at0.satellites.at(2);
  CHECK(b2.lo == doctest::Approx(1798.3640474573892).epsilon(1e-13));
  CHECK(b2.hi == doctest::Approx(2170.439367620987).epsilon(1e-13));
  CHECK_FALSE(b2.closed_lo);

  const LocalizationPlan at1 = build_localization_plan(spec, m_norm, 1.0, 4);
  CHECK(at1.center_band.lo == doctest::Approx(-248.05021344239853).epsilon(1e-14));
  CHECK(at1.center_band.hi == doctest::Approx(1984.4017075391882).epsilon(1e-14));
  CHECK(at1.center_band.closed_lo);
  CHECK_FALSE(at1.center_band.closed_hi);
  CHECK(at1.boundary_gap.lo == doctest::Approx(1984.4017075391882).epsilon(1e-14));
  CHECK(at1.boundary_gap.hi == doctest::Approx(3643.2375099352284).epsilon(1e-14));
  CHECK(at1.window(2).lo == doctest::Approx(1984.4017075391882).epsilon(1e-14));
  CHECK(at1.window(2).hi == doctest::Approx(6697.3557629447605).epsilon(1e-14));
  CHECK_FALSE(at1.small_norm.has_value());

  CHECK(at1.covered(0.5 * (at1.center_band.lo + at1.center_band.hi)));
  CHECK(at1.covered(0.5 * (at1.satellites.at(2).lo + at1.satellites.at(2).hi)));
  CHECK_FALSE(at1.covered(0.5 * (at1.boundary_gap.lo + at1.boundary_gap.hi)));
}

TEST_CASE("plan rejects out-of-range arguments") {
  const OperatorSpec spec = cosine_spec(1.0);
  CHECK_THROWS_AS(build_localization_plan(spec, 1.0, -1.0, 4), invalid_input);
  CHECK_THROWS_AS(build_localization_plan(spec, 1.0, 1.0001, 4), invalid_input);
  CHECK_THROWS_AS(build_localization_plan(spec, 1.0, 0.5, 1), invalid_input);
  CHECK_THROWS_AS(build_localization_plan(spec, -1.0, 0.5, 4), invalid_input);
}

TEST_CASE("degenerate satellites become padded points") {
  const LocalizationPlan plan = build_localization_plan(free_spec(), 0.0, 0.5, 3);
  CHECK(plan.threshold == 2);
  const Interval& b2 = plan.satellites.at(2);
  const double center = 2825.446962492321;  // (4.5 pi)^3
  CHECK(b2.closed_lo);
  CHECK(b2.closed_hi);
  CHECK(b2.width() <= 1e-8 * center);
  CHECK(b2.contains(center));
}

TEST_CASE("small-norm cores appear exactly in the regime") {
  const OperatorSpec spec = cosine_spec(1.0);
  const LocalizationPlan plan = build_localization_plan(spec, 1.0, 0.625, 4);
  REQUIRE(plan.small_norm.has_value());
  const auto& [neg, mid, pos] = *plan.small_norm;
  CHECK(mid.lo == doctest::Approx(1.3686364315913586).epsilon(1e-12));
  CHECK(mid.hi == doctest::Approx(13.771147103711286).epsilon(1e-12));
  CHECK(pos.lo == doctest::Approx(536.4206983960152).epsilon(1e-12));
  CHECK(pos.hi == doctest::Approx(585.2555841674874).epsilon(1e-12));
  CHECK(neg.lo == doctest::Approx(-93.39429667257492).epsilon(1e-12));
  CHECK(neg.hi == doctest::Approx(-67.81411841132758).epsilon(1e-12));

  const LocalizationPlan big = build_localization_plan(cosine_spec(2.0), 2.0, 0.625, 4);
  CHECK_FALSE(big.small_norm.has_value());
}

TEST_CASE("plan families stay pairwise disjoint") {
  const std::vector<double> norms = {0.0, 1.0, std::sqrt(2.0), kPi * kPi, 40.0};
  for (double m_norm : norms) {
    const OperatorSpec spec = cosine_spec(m_norm == 0.0 ? 1.0 : m_norm);
    for (double t : {-0.999999, -0.5, 0.0, 0.3, 1.0}) {
      const int k_max = effective_threshold(m_norm, 3) + 4;
      const LocalizationPlan plan = build_localization_plan(spec, m_norm, t, k_max);
      std::vector<Interval> family;
      family.push_back(plan.center_band);
      for (const auto& [k, iv] : plan.satellites) family.push_back(iv);
      for (size_t a = 0; a < family.size(); ++a)
        for (size_t b = a + 1; b < family.size(); ++b)
          CHECK(disjoint(family[a], family[b]));
      if (plan.small_norm) {
        // The cores refine the center band, so they are only required to
        // clear each other and the satellites.
        const auto& cores = *plan.small_norm;
        for (size_t a = 0; a < cores.size(); ++a) {
          for (size_t b = a + 1; b < cores.size(); ++b)
            CHECK(disjoint(cores[a], cores[b]));
          CHECK(plan.center_band.covers(cores[a]));
          for (const auto& [k, iv] : plan.satellites) CHECK(disjoint(cores[a], iv));
        }
      }
    }
  }
}
