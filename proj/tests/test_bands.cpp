#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "floquet/bands.hpp"
#include "floquet/errors.hpp"
#include "floquet/numeric.hpp"
#include "support.hpp"

using namespace floquet;
using testsupport::cosine_spec;
using testsupport::free_spec;

namespace {

FiberSpectrum solve_at(const OperatorSpec& spec, double t, int truncation) {
  return solve_fiber(assemble_fiber_matrix(spec, t, 1.0, truncation));
}

}  // namespace

TEST_CASE("free numeration at t = 1 resolves the boundary tie upward") {
  // With no perturbation the split point coincides with an eigenvalue pair;
  // the pair belongs to the positive side.
  const OperatorSpec spec = free_spec();
  const LocalizationPlan plan = build_localization_plan(spec, 0.0, 1.0, 4);
  const NumberedSpectrum numbered = try_number_eigenvalues(solve_at(spec, 1.0, 14), plan);
  REQUIRE(numbered.counts_ok);

  const std::map<int, double> expected = {
      {1, 3875.784585037477},   {2, 3875.784585037477},    // (5 pi)^3 twice
      {3, 10635.152901342837},  {4, 10635.152901342837},   // (7 pi)^3 twice
      {-1, 837.1694703680951},  {-2, 837.1694703680951},   // (3 pi)^3
      {-3, 31.006276680299816}, {-4, 31.006276680299816},  // pi^3
      {-5, -31.006276680299816}, {-6, -31.006276680299816},
      {-7, -837.1694703680951}, {-8, -837.1694703680951},
  };
  for (const auto& [index, value] : expected) {
    REQUIRE(numbered.by_index.count(index) == 1);
    CHECK(numbered.by_index.at(index) ==
          doctest::Approx(value).epsilon(1e-10));
  }
  CHECK(numbered.max_checked_k >= 3);
}

TEST_CASE("numeration is monotone across the split") {
  const OperatorSpec spec = cosine_spec(1.0);
  const LocalizationPlan plan = build_localization_plan(spec, 1.0, 0.625, 5);
  const std::map<int, double> numbered =
      number_eigenvalues(solve_at(spec, 0.625, 14), plan);

  const double boundary = plan.boundary_gap.hi;
  int previous_index = 0;
  double previous_value = 0.0;
  bool first = true;
  for (const auto& [index, value] : numbered) {
    if (index < 0) CHECK(value < boundary);
    if (index > 0) CHECK(value >= boundary - 1e-9 * std::abs(boundary));
    if (!first && previous_index + 1 == index && index != 1)
      CHECK(previous_value <= value + 1e-12 * std::abs(value));
    previous_index = index;
    previous_value = value;
    first = false;
  }
}

TEST_CASE("t grid shape") {
  const std::vector<double> grid = make_t_grid(4);
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(-1.0 + 1e-6).epsilon(1e-12));
  CHECK(grid[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(grid[2] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(grid.back() == 1.0);

  const std::vector<double> bare = make_t_grid(4, false);
  REQUIRE(bare.size() == 4);
  CHECK(bare.front() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(bare.back() == 1.0);

  CHECK_THROWS_AS(make_t_grid(0), invalid_input);
}

TEST_CASE("band sweep ranges for the unit cosine example") {
  const OperatorSpec spec = cosine_spec(1.0);
  const BandTable table = build_band_table(spec, make_t_grid(16), 8);
  CHECK(table.threshold == 2);

  // Band 1 sweeps the lower satellite pair edge to edge.
  const Interval band1 = table.band_range(1);
  CHECK(band1.lo == doctest::Approx(837.1694703680951).epsilon(1e-3));
  CHECK(band1.hi == doctest::Approx(3875.784585037477).epsilon(1e-3));

  // Band -1 tops out the central block.
  const Interval neg1 = table.band_range(-1);
  CHECK(neg1.hi == doctest::Approx(837.1694703680951).epsilon(1e-3));

  for (int s : {-8, -3, -1, 1, 3, 8}) {
    const Interval hull = table.band_range(s);
    const Interval padded = table.padded_band_range(s);
    CHECK(padded.covers(hull));
    CHECK(table.max_slope(s) >= 0.0);
  }
}

TEST_CASE("adjacent jumps shrink when the grid doubles") {
  const OperatorSpec spec = cosine_spec(1.0);
  const BandTable coarse = build_band_table(spec, make_t_grid(8), 4);
  const BandTable fine = build_band_table(spec, make_t_grid(16), 4);
  for (int s : {-3, -1, 1, 3}) {
    const double jump_coarse = coarse.max_adjacent_jump(s);
    const double jump_fine = fine.max_adjacent_jump(s);
    REQUIRE(jump_fine > 0.0);
    CHECK(jump_coarse / jump_fine >= 1.5);
  }
}

TEST_CASE("no gaps for the free and unit cosine operators") {
  const BandTable free_table = build_band_table(free_spec(), make_t_grid(16), 8);
  const GapReport free_report = detect_gaps(free_table, free_spec(), 0.0);
  CHECK(free_report.gap_count == 0);
  CHECK(free_report.whole_line);
  CHECK(free_report.within_bound);

  const GapReport unit_report = detect_gaps_confirmed(cosine_spec(1.0), 12, 8);
  CHECK(unit_report.gap_count == 0);
  CHECK(unit_report.whole_line);
}

TEST_CASE("gap count honors the bound at pi^2") {
  const GapReport report = detect_gaps_confirmed(cosine_spec(kPi * kPi), 12, 10);
  CHECK(report.bound == 5);
  CHECK(report.gap_count <= report.bound);
  CHECK(report.within_bound);
  CHECK_FALSE(report.whole_line);
}

TEST_CASE("overlap intervals sit inside the band sweeps") {
  const OperatorSpec spec = cosine_spec(1.0);
  const BandTable table = build_band_table(spec, make_t_grid(12), 10);
  const OverlapCheck check = check_overlap(table, spec, 1.0, 2);
  CHECK(check.ok);
  CHECK_FALSE(check.positive_vacuous);
  CHECK_FALSE(check.negative_vacuous);
  CHECK(check.positive.lo == doctest::Approx(851.3066373092491).epsilon(1e-12));
  CHECK(check.positive.hi == doctest::Approx(3852.2226401355533).epsilon(1e-12));
  CHECK(check.negative.lo == doctest::Approx(-3852.2226401355533).epsilon(1e-12));
  CHECK(check.negative.hi == doctest::Approx(-851.3066373092491).epsilon(1e-12));

  // Satellite index out of the table's reach.
  CHECK_THROWS_AS(check_overlap(table, spec, 1.0, 9), invalid_input);
}

TEST_CASE("small-norm structure holds for the unit example only") {
  const OperatorSpec unit = cosine_spec(1.0);
  const BandTable table = build_band_table(unit, make_t_grid(12), 6);
  const SmallNormStructure structure = check_small_m_structure(table, unit, 1.0, 0.5);
  CHECK(structure.ok);
  CHECK(structure.intervals_ok);
  CHECK(structure.chain_ok);

  const OperatorSpec big = cosine_spec(2.0);
  const BandTable big_table = build_band_table(big, make_t_grid(8), 6);
  CHECK_THROWS_AS(check_small_m_structure(big_table, big, 2.0, 0.5), invalid_input);
}

TEST_CASE("band table input validation") {
  CHECK_THROWS_AS(build_band_table(free_spec(), make_t_grid(4), 0), invalid_input);
  CHECK_THROWS_AS(build_band_table(free_spec(), {}, 4), invalid_input);
}
