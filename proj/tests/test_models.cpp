#include <cmath>

#include "doctest.h"
#include "svp/errors.hpp"
#include "svp/models.hpp"

using namespace svp;

namespace {

PiecewiseLinearMap1D doubling_map() {
  PiecewiseLinearMap1D map;
  map.branches = {{2.0, 0.0, 0.5}, {2.0, 0.5, 1.0}};
  return map;
}

PiecewiseLinearMap1D cookie_cutter_23() {
  PiecewiseLinearMap1D map;
  map.branches = {{2.0, 0.0, 0.5}, {3.0, 2.0 / 3.0, 1.0}};
  return map;
}

double piece_total(const Realizer& r, int depth) {
  double n = 0.0;
  r.pieces(depth, [&](const GeometryPiece&) { n += 1.0; });
  return n;
}

}  // namespace

TEST_CASE("build_1d doubling map") {
  ModelSystem m = build_1d(doubling_map());
  CHECK(m.system.sft.full_shift());
  CHECK(m.system.cocycle.d == 1);
  CHECK(m.system.cocycle.mats[0].at(0, 0) == 2.0);
  CHECK(m.system.cocycle.expanding);
  // realizer pieces count admissible words
  for (int depth : {1, 3, 5})
    CHECK(piece_total(m.realizer, depth) == count_words(m.system.sft, depth).as_double());
  // depth-2 pieces are the dyadic intervals of length 1/4
  std::vector<GeometryPiece> pieces;
  m.realizer.pieces(2, [&](const GeometryPiece& p) { pieces.push_back(p); });
  REQUIRE(pieces.size() == 4);
  CHECK(pieces[1].lo[0] == doctest::Approx(0.25));
  CHECK(pieces[1].hi[0] == doctest::Approx(0.5));
}

TEST_CASE("build_1d golden-mean restriction of the doubling map") {
  PiecewiseLinearMap1D map = doubling_map();
  map.transitions = {{1, 1}, {1, 0}};
  ModelSystem m = build_1d(map);
  CHECK_FALSE(m.system.sft.full_shift());
  CHECK(m.system.sft.irreducible);
  // conformal dimension h/log 2
  DimensionBracket b = repeller_bracket(m.system, Schedule::from_levels({1, 2}));
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(b.upper == doctest::Approx(std::log(phi) / std::log(2.0)).epsilon(1e-6));
  CHECK(b.lower == doctest::Approx(std::log(phi) / std::log(2.0)).epsilon(1e-6));
  for (int depth : {2, 4, 6})
    CHECK(piece_total(m.realizer, depth) == count_words(m.system.sft, depth).as_double());
}

TEST_CASE("build_1d cookie-cutter and validation errors") {
  ModelSystem m = build_1d(cookie_cutter_23());
  DimensionBracket b = repeller_bracket(m.system, Schedule::from_levels({1}));
  CHECK(b.upper == doctest::Approx(moran_root({2.0, 3.0})).epsilon(1e-6));

  PiecewiseLinearMap1D overlap;
  overlap.branches = {{2.0, 0.0, 0.6}, {2.0, 0.5, 1.0}};
  CHECK_THROWS_AS((void)build_1d(overlap), Error);

  PiecewiseLinearMap1D weak;
  weak.branches = {{0.9, 0.0, 1.0}};
  CHECK_THROWS_AS((void)build_1d(weak), Error);

  // restriction may not allow geometrically impossible transitions
  PiecewiseLinearMap1D partial;
  partial.branches = {{1.6, 0.0, 0.5}, {2.0, 0.5, 1.0}};  // image of branch 0 is [0, 0.8)
  CHECK_THROWS_AS((void)build_1d(partial), Error);
}

TEST_CASE("build_toral full and restricted digit sets") {
  DiagonalToralSystem spec;
  spec.factors = {2, 4};
  for (int d1 = 0; d1 < 2; ++d1)
    for (int d2 = 0; d2 < 4; ++d2) spec.digits.push_back({d1, d2});
  ModelSystem m = build_toral(spec);
  CHECK(m.system.sft.full_shift());
  CHECK(m.system.sft.k == 8);
  CHECK(m.system.cocycle.mats[0].at(0, 0) == 2.0);
  CHECK(m.system.cocycle.mats[0].at(1, 1) == 4.0);
  CHECK(m.system.cocycle.expanding);
  REQUIRE(m.system.cocycle.blocks.has_value());
  // strongest first: the factor-4 axis leads
  CHECK(m.system.cocycle.blocks->blocks[0].offset == 1);
  for (int depth : {1, 2, 3})
    CHECK(piece_total(m.realizer, depth) == count_words(m.system.sft, depth).as_double());

  DiagonalToralSystem empty;
  empty.factors = {2, 2};
  CHECK_THROWS_AS((void)build_toral(empty), Error);
}

TEST_CASE("build_toral conformal case reduces to the moran root") {
  DiagonalToralSystem spec;
  spec.factors = {3, 3};
  spec.digits = {{0, 0}, {1, 1}, {0, 2}, {2, 2}};
  ModelSystem m = build_toral(spec);
  DimensionBracket b = repeller_bracket(m.system, Schedule::from_levels({1, 2}));
  double expected = moran_root({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  CHECK(b.upper == doctest::Approx(expected).epsilon(1e-6));
  CHECK(b.lower == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("build_ifs affinity pipeline") {
  SelfAffineIfs spec;
  spec.d = 2;
  spec.maps = {Mat::diag({0.5, 0.25}), Mat::diag({0.5, 0.25}), Mat::diag({0.5, 0.25})};
  spec.translations = {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.75}};
  ModelSystem m = build_ifs(spec);
  CHECK(m.system.cocycle.orientation == MatrixCocycle::Orientation::Contraction);
  DimensionBracket b = affinity_dimension(m.system, Schedule::from_levels({1, 2}));
  CHECK(b.upper == doctest::Approx(1.0 + std::log(1.5) / std::log(4.0)).epsilon(1e-6));
  for (int depth : {1, 2, 4})
    CHECK(piece_total(m.realizer, depth) == count_words(m.system.sft, depth).as_double());

  // two similarities of ratio 1/3
  SelfAffineIfs sim;
  sim.d = 2;
  sim.maps = {Mat::diag({1.0 / 3.0, 1.0 / 3.0}), Mat::diag({1.0 / 3.0, 1.0 / 3.0})};
  sim.translations = {{0.0, 0.0}, {2.0 / 3.0, 2.0 / 3.0}};
  DimensionBracket bs = affinity_dimension(build_ifs(sim).system, Schedule::from_levels({1}));
  CHECK(bs.upper == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-6));

  SelfAffineIfs bad;
  bad.d = 2;
  bad.maps = {Mat::diag({1.1, 0.5})};
  bad.translations = {{0.0, 0.0}};
  CHECK_THROWS_AS((void)build_ifs(bad), Error);
}

TEST_CASE("box oracle on geometric models") {
  // full unit square: diag(2,2), 4 digits
  DiagonalToralSystem square;
  square.factors = {2, 2};
  square.digits = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  BoxCountResult full = box_counting_oracle(build_toral(square).realizer, {3, 4, 5, 6});
  CHECK(full.slope == doctest::Approx(2.0).epsilon(0.025));

  // middle-thirds Cantor set as a cookie cutter
  PiecewiseLinearMap1D cantor;
  cantor.branches = {{3.0, 0.0, 1.0 / 3.0}, {3.0, 2.0 / 3.0, 1.0}};
  BoxCountResult c = box_counting_oracle(build_1d(cantor).realizer, {4, 5, 6, 7, 8});
  CHECK(std::fabs(c.slope - std::log(2.0) / std::log(3.0)) < 0.02);

  // Cantor x Cantor via the (3,3) toral system with corner digits
  DiagonalToralSystem cc;
  cc.factors = {3, 3};
  cc.digits = {{0, 0}, {0, 2}, {2, 0}, {2, 2}};
  BoxCountResult c2 = box_counting_oracle(build_toral(cc).realizer, {4, 5, 6, 7});
  CHECK(std::fabs(c2.slope - 2.0 * std::log(2.0) / std::log(3.0)) < 0.05);
}

TEST_CASE("perturb preserves the base at zero and validates invariants") {
  SelfAffineIfs spec;
  spec.d = 2;
  spec.maps = {Mat::diag({0.5, 0.25}), Mat::diag({0.4, 0.3})};
  spec.translations = {{0.0, 0.0}, {0.5, 0.5}};
  ModelSystem base = build_ifs(spec);

  PerturbationFamily family;
  family.base = base.system;
  family.directions = {Mat::diag({1.0, 1.0}), Mat::diag({1.0, 1.0})};
  family.eps_grid = {0.0, 0.01, 0.1, 0.6};

  CocycleSystem same = perturb(family, 0.0);
  for (std::size_t i = 0; i < same.cocycle.mats.size(); ++i)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(same.cocycle.mats[i].at(r, c) == base.system.cocycle.mats[i].at(r, c));

  CocycleSystem moved = perturb(family, 0.01);
  CHECK(moved.cocycle.mats[0].at(0, 0) == doctest::Approx(0.51));
  CHECK(moved.cocycle.contracting());

  // eps = 0.6 pushes 0.5 + 0.6 past 1: contraction lost
  CHECK_THROWS_AS((void)perturb(family, 0.6), Error);
  // eps off the grid is rejected
  CHECK_THROWS_AS((void)perturb(family, 0.02), Error);
}

TEST_CASE("perturbed diagonal pressure follows the closed form") {
  CocycleSystem base;
  base.sft = full_shift(2);
  base.cocycle = make_cocycle({Mat(1, {2.0}), Mat(1, {3.0})},
                              MatrixCocycle::Orientation::Derivative);
  PerturbationFamily family;
  family.base = base;
  family.directions = {Mat(1, {1.0}), Mat(1, {-1.0})};
  family.eps_grid = {0.0, 0.05, 0.1};

  PotentialSpec spec;
  spec.kind = PotentialKind::Top;
  spec.s = 1.0;
  spec.sign = -1;
  for (double eps : family.eps_grid) {
    CocycleSystem sys = perturb(family, eps);
    double expected = std::log(1.0 / (2.0 + eps) + 1.0 / (3.0 - eps));
    CHECK(block_pressure(sys, spec, 2).value == doctest::Approx(expected).epsilon(1e-10));
  }
}
