#include <cmath>

#include "doctest.h"
#include "svp/dimension.hpp"
#include "svp/errors.hpp"
#include "svp/util.hpp"

using namespace svp;

namespace {

CocycleSystem constant_system(const Mat& gen, int branches,
                              MatrixCocycle::Orientation orientation) {
  CocycleSystem sys;
  sys.sft = full_shift(branches);
  sys.cocycle = make_cocycle(std::vector<Mat>(std::size_t(branches), gen), orientation);
  sys.name = "constant";
  return sys;
}

CocycleSystem slopes_system(const std::vector<double>& slopes) {
  CocycleSystem sys;
  sys.sft = full_shift(int(slopes.size()));
  std::vector<Mat> mats;
  for (double a : slopes) mats.push_back(Mat(1, {a}));
  sys.cocycle = make_cocycle(mats, MatrixCocycle::Orientation::Derivative);
  sys.name = "slopes";
  return sys;
}

PressureFunctionHandle affine_handle(double at0, double slope, double dmax) {
  PressureFunctionHandle h;
  h.dmax = dmax;
  h.label = "affine";
  h.eval = [=](double s) {
    PressureEstimate e;
    e.value = at0 - slope * s;
    e.direction = Direction::UpperBound;
    return e;
  };
  return h;
}

}  // namespace

TEST_CASE("moran_root closed cases") {
  CHECK(moran_root({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(moran_root({1.0 / 3.0, 1.0 / 3.0}) ==
        doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-11));
  // slopes are accepted as reciprocals; frozen from the bisection oracle
  CHECK(moran_root({2.0, 3.0}) == doctest::Approx(0.7878849110258698).epsilon(1e-10));
  CHECK(moran_root({0.5}) == 0.0);
  CHECK_THROWS_AS((void)moran_root({}), Error);
}

TEST_CASE("bowen_root bisection and saturation") {
  // conformal full 2-shift, slope 2: log 2 - s log 2 has root 1
  RootResult r = bowen_root(affine_handle(std::log(2.0), std::log(2.0), 2.0));
  CHECK(r.flag == RootResult::Flag::Bracketed);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));

  // Moran pressure of slopes (2,3): root matches the scalar oracle
  PressureFunctionHandle moran;
  moran.dmax = 1.0;
  moran.eval = [](double s) {
    PressureEstimate e;
    e.value = std::log(std::pow(2.0, -s) + std::pow(3.0, -s));
    return e;
  };
  RootResult rm = bowen_root(moran);
  CHECK(rm.value == doctest::Approx(moran_root({2.0, 3.0})).epsilon(1e-9));

  // constant positive pressure saturates at d
  RootResult sat = bowen_root(affine_handle(0.1, 0.0, 2.0));
  CHECK(sat.flag == RootResult::Flag::SaturatedHigh);
  CHECK(sat.value == 2.0);

  // nonpositive at zero saturates at 0
  RootResult low = bowen_root(affine_handle(-0.2, 1.0, 2.0));
  CHECK(low.flag == RootResult::Flag::SaturatedLow);
  CHECK(low.value == 0.0);
}

TEST_CASE("monotonicity transfer: dominated handles give dominated roots") {
  SplitMix64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    double a = rng.uniform(0.5, 2.0), slope = rng.uniform(0.4, 2.0);
    double bump = rng.uniform(0.0, 0.5);
    RootResult rb = bowen_root(affine_handle(a, slope, 4.0));
    RootResult ra = bowen_root(affine_handle(a + bump, slope, 4.0));
    CHECK(ra.value >= rb.value - 1e-12);
  }
}

TEST_CASE("repeller bracket collapses in the conformal case") {
  Schedule schedule = Schedule::from_levels({1, 2});
  // 9 branches of slope 3 in the plane: dimension 2 (full square)
  CocycleSystem nine = constant_system(Mat::diag({3.0, 3.0}), 9,
                                       MatrixCocycle::Orientation::Derivative);
  DimensionBracket b9 = repeller_bracket(nine, schedule);
  CHECK(b9.lower == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(b9.upper == doctest::Approx(2.0).epsilon(1e-6));

  // d=1 slopes (2,3): both endpoints at the Moran root
  CocycleSystem moran = slopes_system({2.0, 3.0});
  DimensionBracket bm = repeller_bracket(moran, schedule);
  double root = moran_root({2.0, 3.0});
  CHECK(bm.lower == doctest::Approx(root).epsilon(1e-6));
  CHECK(bm.upper == doctest::Approx(root).epsilon(1e-6));
  CHECK(bm.lower <= bm.upper + 1e-9);
}

TEST_CASE("repeller bracket on the diag(2,4) full toral system") {
  CocycleSystem toral = constant_system(Mat::diag({2.0, 4.0}), 8,
                                        MatrixCocycle::Orientation::Derivative);
  DimensionBracket b = repeller_bracket(toral, Schedule::from_levels({1, 2}));
  CHECK(b.lower == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(b.upper == doctest::Approx(2.0).epsilon(1e-6));
  // one-step root (k = 0) is always in the trace
  bool has_one_step = false;
  for (const auto& t : b.trace)
    if (t.estimator == "super_power_lower" && t.level == 0) has_one_step = true;
  CHECK(has_one_step);
}

TEST_CASE("repeller bracket requires an expanding derivative cocycle") {
  CocycleSystem weak = constant_system(Mat::diag({2.0, 0.5}), 2,
                                       MatrixCocycle::Orientation::Derivative);
  CHECK_THROWS_AS((void)repeller_bracket(weak, Schedule{}), Error);
}

TEST_CASE("caratheodory dimension equals the upper generating root") {
  Schedule schedule = Schedule::from_levels({1, 2, 3});
  for (auto&& sys : {slopes_system({2.0, 3.0}),
                     constant_system(Mat::diag({2.0, 4.0}), 8,
                                     MatrixCocycle::Orientation::Derivative)}) {
    DimensionBracket cara = caratheodory_dimension(sys, schedule);
    DimensionBracket rep = repeller_bracket(sys, schedule);
    CHECK(cara.target == BracketTarget::Caratheodory);
    CHECK(cara.upper == rep.upper);  // identical machinery by construction
    CHECK(cara.lower == cara.upper);
  }
  CocycleSystem doubling = slopes_system({2.0, 2.0});
  CHECK(caratheodory_dimension(doubling, schedule).upper ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("affinity dimension brackets") {
  Schedule schedule = Schedule::from_levels({1, 2, 3});
  // three copies of diag(1/2,1/4): 1 + ln(3/2)/ln 4
  CocycleSystem ifs = constant_system(Mat::diag({0.5, 0.25}), 3,
                                      MatrixCocycle::Orientation::Contraction);
  DimensionBracket b = affinity_dimension(ifs, schedule);
  double expected = 1.0 + std::log(1.5) / std::log(4.0);
  CHECK(b.upper == doctest::Approx(expected).epsilon(1e-6));
  CHECK(b.lower == doctest::Approx(expected).epsilon(1e-6));  // diagonal: exact lower
  CHECK(b.lower <= b.upper + 1e-9);

  // single contraction: zero entropy, saturation at 0
  CocycleSystem single = constant_system(Mat::diag({0.5, 0.5}), 1,
                                         MatrixCocycle::Orientation::Contraction);
  DimensionBracket bs = affinity_dimension(single, schedule);
  CHECK(bs.upper == 0.0);
  bool saturated = false;
  for (const auto& f : bs.flags)
    if (f.find("saturated_low") != std::string::npos) saturated = true;
  CHECK(saturated);

  // two conformal maps of ratio 1/2: similarity dimension 1
  CocycleSystem sim = constant_system(Mat::diag({0.5, 0.5}), 2,
                                      MatrixCocycle::Orientation::Contraction);
  CHECK(affinity_dimension(sim, schedule).upper == doctest::Approx(1.0).epsilon(1e-6));

  CocycleSystem notc = constant_system(Mat::diag({1.5, 0.5}), 2,
                                       MatrixCocycle::Orientation::Contraction);
  CHECK_THROWS_AS((void)affinity_dimension(notc, schedule), Error);
}

TEST_CASE("cover measure of the single-branch system is the closed form") {
  CocycleSystem one = slopes_system({2.0});
  for (int depth : {4, 6, 8}) {
    double alpha = 0.7;
    double v = caratheodory_cover_measure(one, {}, alpha, depth, depth);
    CHECK(v == doctest::Approx(std::exp(-depth * alpha * std::log(2.0))).epsilon(1e-10));
  }
}

TEST_CASE("cover measure dichotomy around the root") {
  Schedule schedule = Schedule::from_levels({1, 2});
  for (auto&& sys : {slopes_system({2.0, 3.0}),
                     constant_system(Mat::diag({2.0, 4.0}), 4,
                                     MatrixCocycle::Orientation::Derivative)}) {
    double root = caratheodory_dimension(sys, schedule).upper;
    double lo_prev = 0.0, hi_prev = 1e300;
    for (int depth : {6, 8, 10}) {
      double grow = caratheodory_cover_measure(sys, {}, root - 0.1, depth, depth + 2);
      double decay = caratheodory_cover_measure(sys, {}, root + 0.1, depth, depth + 2);
      CHECK(grow > lo_prev);
      CHECK(decay < hi_prev);
      lo_prev = grow;
      hi_prev = decay;
    }
  }
}

TEST_CASE("cover measure respects forbidden words") {
  // golden-mean subset of the doubling system: forbidding 11 cuts the count
  CocycleSystem doubling = slopes_system({2.0, 2.0});
  double whole = caratheodory_cover_measure(doubling, {}, 0.5, 5, 5);
  double sub = caratheodory_cover_measure(doubling, {{1, 1}}, 0.5, 5, 5);
  CHECK(sub < whole);
  // at alpha = 0, depth-n cover value of the sub-SFT counts its n-words
  double count = caratheodory_cover_measure(doubling, {{1, 1}}, 0.0, 5, 5);
  CHECK(count == doctest::Approx(13.0).epsilon(1e-12));  // F(7) golden-mean 5-words

  CHECK_THROWS_AS(
      (void)caratheodory_cover_measure(doubling, {{0}, {1}}, 0.5, 3, 3), Error);
  CHECK_THROWS_AS((void)caratheodory_cover_measure(doubling, {}, 0.5, 3, 25), Error);
}

TEST_CASE("box counting of simple realizers") {
  // the unit interval streamed as dyadic pieces: slope 1
  Realizer interval;
  interval.dim = 1;
  interval.max_diameter = [](int m) { return std::ldexp(1.0, -m); };
  interval.piece_count = [](int m) { return std::ldexp(1.0, m); };
  interval.pieces = [](int m, const std::function<void(const GeometryPiece&)>& emit) {
    long n = 1L << m;
    for (long i = 0; i < n; ++i) {
      GeometryPiece p;
      p.lo[0] = double(i) / double(n);
      p.hi[0] = double(i + 1) / double(n);
      emit(p);
    }
  };
  BoxCountResult r = box_counting_oracle(interval, {4, 5, 6, 7});
  CHECK(r.slope == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.residual < 0.05);
}
