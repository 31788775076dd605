#include <cmath>

#include "doctest.h"
#include "svp/errors.hpp"
#include "svp/potentials.hpp"
#include "svp/util.hpp"

using namespace svp;

namespace {

Mat random_invertible(SplitMix64& rng, int d) {
  while (true) {
    Mat m(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m.at(i, j) = rng.uniform(-2.0, 2.0);
    if (std::fabs(determinant(m)) > 1e-2) return m;
  }
}

PotentialSpec top(double s, int sign = +1) {
  PotentialSpec spec;
  spec.kind = PotentialKind::Top;
  spec.s = s;
  spec.sign = sign;
  return spec;
}

PotentialSpec bottom(double s, int sign = +1) {
  PotentialSpec spec;
  spec.kind = PotentialKind::Bottom;
  spec.s = s;
  spec.sign = sign;
  return spec;
}

}  // namespace

TEST_CASE("potential_log closed cases") {
  Mat m = Mat::diag({3.0, 2.0});
  CHECK(potential_log(m, top(1.5)) ==
        doctest::Approx(std::log(3.0) + 0.5 * std::log(2.0)).epsilon(1e-13));
  CHECK(potential_log(m, bottom(1.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(potential_log(m, top(1.5, -1)) ==
        doctest::Approx(-(std::log(3.0) + 0.5 * std::log(2.0))).epsilon(1e-13));
  CHECK(potential_log(m, top(0.0)) == 0.0);

  SplitMix64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + int(rng.next() % 4);
    Mat a = random_invertible(rng, d);
    CHECK(potential_log(a, top(double(d))) ==
          doctest::Approx(std::log(std::fabs(determinant(a)))).epsilon(1e-10));
  }
}

TEST_CASE("tilde potentials on block-diagonal matrices") {
  // blocks listed strongest-first: E1 = {1} carries 4, E2 = {2} carries 2
  Mat m = Mat::diag({4.0, 2.0});
  BlockSplit split = BlockSplit::from_index_lists(2, {{1}, {2}});

  PotentialSpec tb;
  tb.kind = PotentialKind::TildeBottom;
  tb.s = 1.5;
  tb.blocks = split;
  // trailing blocks first: log m(M|E2) + 0.5 log m(M|E1)
  CHECK(potential_log(m, tb) ==
        doctest::Approx(std::log(2.0) + 0.5 * std::log(4.0)).epsilon(1e-13));

  PotentialSpec tt;
  tt.kind = PotentialKind::TildeTop;
  tt.s = 1.5;
  tt.blocks = split;
  CHECK(potential_log(m, tt) ==
        doctest::Approx(std::log(4.0) + 0.5 * std::log(2.0)).epsilon(1e-13));

  // for diagonal matrices with aligned blocks the tilde and plain variants agree
  SplitMix64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    double a = std::exp(rng.uniform(0.5, 2.0));  // strongest
    double b = std::exp(rng.uniform(-1.0, 0.4));
    Mat d2 = Mat::diag({a, b});
    for (double s : {0.3, 1.0, 1.7, 2.0}) {
      PotentialSpec tt2 = tt;
      tt2.s = s;
      PotentialSpec tb2 = tb;
      tb2.s = s;
      CHECK(potential_log(d2, tt2) == doctest::Approx(potential_log(d2, top(s))).epsilon(1e-12));
      CHECK(potential_log(d2, tb2) ==
            doctest::Approx(potential_log(d2, bottom(s))).epsilon(1e-12));
    }
  }

  Mat off(2, {4.0, 0.5, 0.0, 2.0});
  PotentialSpec bad = tt;
  CHECK_THROWS_AS((void)potential_log(off, bad), Error);

  PotentialSpec oor = top(2.5);
  CHECK_THROWS_AS((void)potential_log(m, oor), Error);
}

TEST_CASE("scalar kind is the conformal reduction") {
  double c = 1.7;
  Mat rot(2, {0.0, -c, c, 0.0});  // c times a rotation
  PotentialSpec sc;
  sc.kind = PotentialKind::Scalar;
  sc.s = 1.3;
  CHECK(potential_log(rot, sc) == doctest::Approx(1.3 * std::log(c)).epsilon(1e-12));
  CHECK(potential_log(rot, top(1.3)) == doctest::Approx(1.3 * std::log(c)).epsilon(1e-12));
}

TEST_CASE("potential_log continuous across integer breakpoints") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 2 + int(rng.next() % 3);
    Mat m = random_invertible(rng, d);
    for (int breakpoint = 1; breakpoint < d; ++breakpoint) {
      double eps = 1e-12;
      for (auto kind : {PotentialKind::Top, PotentialKind::Bottom}) {
        PotentialSpec lo, hi;
        lo.kind = hi.kind = kind;
        lo.s = double(breakpoint) - eps;
        hi.s = double(breakpoint) + eps;
        CHECK(std::fabs(potential_log(m, lo) - potential_log(m, hi)) < 1e-10);
      }
    }
  }
}

TEST_CASE("scaling shifts potentials by s log c") {
  SplitMix64 rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    Mat m = random_invertible(rng, 3);
    double c = std::exp(rng.uniform(-1.0, 1.0));
    for (double s : {0.5, 1.0, 2.2, 3.0}) {
      CHECK(potential_log(m.scaled(c), top(s)) ==
            doctest::Approx(potential_log(m, top(s)) + s * std::log(c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sub- and super-multiplicativity across concatenation") {
  SplitMix64 rng(45);
  for (int trial = 0; trial < 60; ++trial) {
    int d = 2 + int(rng.next() % 2);
    Mat a = random_invertible(rng, d), b = random_invertible(rng, d);
    Mat ab = a * b;
    for (double frac : {0.0, 0.3, 0.8}) {
      for (int whole = 0; whole < d; ++whole) {
        double s = whole + frac;
        if (s == 0.0 || s > d) continue;
        CHECK(potential_log(ab, top(s)) <=
              potential_log(a, top(s)) + potential_log(b, top(s)) + 1e-10);
        CHECK(potential_log(ab, bottom(s)) >=
              potential_log(a, bottom(s)) + potential_log(b, bottom(s)) - 1e-10);
      }
    }
  }
}

TEST_CASE("additivity classification") {
  CHECK(is_subadditive(top(1.0, +1), 2));
  CHECK_FALSE(is_subadditive(top(1.0, -1), 2));
  CHECK(is_superadditive(top(1.0, -1), 2));
  CHECK(is_subadditive(bottom(1.0, -1), 2));
  CHECK(is_superadditive(bottom(1.0, +1), 2));
  CHECK_FALSE(is_superadditive(bottom(1.0, -1), 2));
  // d = 1 and scalar kinds are exactly additive
  CHECK(is_subadditive(top(0.7, -1), 1));
  CHECK(is_superadditive(top(0.7, +1), 1));
  PotentialSpec sc;
  sc.kind = PotentialKind::Scalar;
  sc.s = 1.0;
  CHECK(is_subadditive(sc, 3));
  CHECK(is_superadditive(sc, 3));
}

TEST_CASE("cocycle products") {
  std::vector<Mat> gens{Mat(2, {0, 1, 1, 0}), Mat(2, {2, 0, 0, 1})};
  MatrixCocycle c = make_cocycle(gens, MatrixCocycle::Orientation::Derivative);
  CHECK_FALSE(c.expanding);  // the swap matrix has singular values 1

  ScaledMat single = cocycle_product(c, {1});
  CHECK(single.m.at(0, 0) == 2.0);
  CHECK(single.log_scale == 0.0);

  // order sensitivity: word (0,1) means A1 * A0
  ScaledMat prod = cocycle_product(c, {0, 1});
  CHECK(prod.m.at(0, 0) == 0.0);
  CHECK(prod.m.at(0, 1) == 2.0);
  CHECK(prod.m.at(1, 0) == 1.0);
  CHECK(prod.m.at(1, 1) == 0.0);

  CHECK_THROWS_AS((void)cocycle_product(c, {}), Error);

  // commuting diagonal generators: order independent
  std::vector<Mat> diag{Mat::diag({2.0, 0.5}), Mat::diag({3.0, 4.0})};
  MatrixCocycle dc = make_cocycle(diag, MatrixCocycle::Orientation::Derivative);
  ScaledMat p01 = cocycle_product(dc, {0, 1});
  ScaledMat p10 = cocycle_product(dc, {1, 0});
  for (int i = 0; i < 2; ++i) CHECK(p01.m.at(i, i) == doctest::Approx(p10.m.at(i, i)));
}

TEST_CASE("long products stay in range through the scale factor") {
  std::vector<Mat> gens{Mat::diag({3.0, 0.25})};
  MatrixCocycle c = make_cocycle(gens, MatrixCocycle::Orientation::Derivative);
  Word w(400, 0);
  ScaledMat prod = cocycle_product(c, w);
  CHECK(prod.m.finite());
  PotentialSpec spec;
  spec.kind = PotentialKind::Top;
  spec.s = 1.0;
  CHECK(potential_log(prod, spec) == doctest::Approx(400.0 * std::log(3.0)).epsilon(1e-10));
  spec.kind = PotentialKind::Bottom;
  CHECK(potential_log(prod, spec) == doctest::Approx(400.0 * std::log(0.25)).epsilon(1e-10));
}

TEST_CASE("expanding and contracting flags") {
  auto expanding = make_cocycle({Mat::diag({2.0, 4.0})}, MatrixCocycle::Orientation::Derivative);
  CHECK(expanding.expanding);
  auto weak = make_cocycle({Mat::diag({2.0, 0.9})}, MatrixCocycle::Orientation::Derivative);
  CHECK_FALSE(weak.expanding);
  auto contracting =
      make_cocycle({Mat::diag({0.5, 0.25})}, MatrixCocycle::Orientation::Contraction);
  CHECK(contracting.contracting());
  CHECK_THROWS_AS((void)make_cocycle({Mat(2)}, MatrixCocycle::Orientation::Derivative), Error);
}

TEST_CASE("domination check") {
  Sft full2 = full_shift(2);
  BlockSplit weakest_first = BlockSplit::from_index_lists(2, {{1}, {2}});

  // identical diag(2,4) generators: dominated with gap log 2 per step
  MatrixCocycle c24 = make_cocycle({Mat::diag({2.0, 4.0}), Mat::diag({2.0, 4.0})},
                                   MatrixCocycle::Orientation::Derivative);
  DominationReport r = check_domination(c24, full2, weakest_first, 6);
  CHECK(r.dominated);
  REQUIRE(r.gaps.size() == 1);
  CHECK(r.gaps[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // equal rates: zero gap, not dominated
  MatrixCocycle c22 = make_cocycle({Mat::diag({2.0, 2.0}), Mat::diag({2.0, 2.0})},
                                   MatrixCocycle::Orientation::Derivative);
  DominationReport r22 = check_domination(c22, full2, weakest_first, 5);
  CHECK_FALSE(r22.dominated);
  CHECK(r22.gaps[0] == doctest::Approx(0.0));

  // mixed diag(2,4) and diag(3,5): gap is min(log 2, log(5/3))
  MatrixCocycle mixed = make_cocycle({Mat::diag({2.0, 4.0}), Mat::diag({3.0, 5.0})},
                                     MatrixCocycle::Orientation::Derivative);
  DominationReport rm = check_domination(mixed, full2, weakest_first, 10);
  CHECK(rm.dominated);
  CHECK(rm.gaps[0] == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("block split validation") {
  CHECK_THROWS_AS((void)BlockSplit::from_index_lists(3, {{1}, {3}}), Error);     // missing 2
  CHECK_THROWS_AS((void)BlockSplit::from_index_lists(3, {{1, 3}, {2}}), Error);  // gap
  auto ok = BlockSplit::from_index_lists(3, {{3}, {1, 2}});
  CHECK(ok.blocks[0].offset == 2);
  CHECK(ok.blocks[1].size == 2);
}
