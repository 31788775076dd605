#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "svp/errors.hpp"
#include "svp/sft.hpp"
#include "svp/transfer.hpp"
#include "svp/util.hpp"

using namespace svp;

namespace {

Sft golden_mean() { return validate_sft({{1, 1}, {1, 0}}); }

// brute-force word count: filter all k^n tuples
std::uint64_t brute_count(const Sft& sft, int n) {
  std::uint64_t total = 0;
  std::vector<int> w(std::size_t(n), 0);
  while (true) {
    if (sft.admissible(w)) ++total;
    int pos = n - 1;
    while (pos >= 0 && ++w[std::size_t(pos)] == sft.k) w[std::size_t(pos--)] = 0;
    if (pos < 0) break;
  }
  return total;
}

Sft random_sft(SplitMix64& rng, int k) {
  while (true) {
    std::vector<std::vector<int>> rows(std::size_t(k), std::vector<int>(std::size_t(k), 0));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) rows[std::size_t(i)][std::size_t(j)] = rng.uniform() < 0.6;
    try {
      return validate_sft(rows);
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace

TEST_CASE("validate_sft basics") {
  Sft full = full_shift(2);
  CHECK(full.irreducible);
  CHECK(full.full_shift());

  Sft gm = golden_mean();
  CHECK(gm.irreducible);
  CHECK_FALSE(gm.full_shift());

  CHECK_THROWS_AS((void)validate_sft({{1, 0}, {1, 0}}), Error);  // column 1 empty
  CHECK_THROWS_AS((void)validate_sft({{1, 1}}), Error);          // wrong row length
  CHECK_THROWS_AS((void)validate_sft({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}), Error);

  Sft reducible = validate_sft({{1, 1}, {0, 1}});
  CHECK_FALSE(reducible.irreducible);
}

TEST_CASE("count_words closed cases") {
  CHECK(count_words(full_shift(2), 10).value == 1024);
  CHECK(count_words(golden_mean(), 5).value == 13);  // Fibonacci F(7)
  CHECK(count_words(validate_sft({{1}}), 7).value == 1);
  CHECK(count_words(golden_mean(), 1).value == 2);
}

TEST_CASE("count_words overflow falls back to floats") {
  WordCount c = count_words(full_shift(2), 80);
  CHECK_FALSE(c.exact);
  CHECK(c.approx == doctest::Approx(std::pow(2.0, 80.0)).epsilon(1e-9));
}

TEST_CASE("count matches brute force and is submultiplicative") {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    Sft sft = random_sft(rng, 2 + int(rng.next() % 2));
    for (int n = 1; n <= 6; ++n)
      CHECK(count_words(sft, n).value == brute_count(sft, n));
    for (int n = 1; n <= 5; ++n)
      for (int m = 1; m <= 5; ++m) {
        double lhs = count_words(sft, n + m).as_double();
        double rhs = count_words(sft, n).as_double() * count_words(sft, m).as_double();
        CHECK(lhs <= rhs);
      }
  }
}

TEST_CASE("enumerate_words lexicographic") {
  auto gm2 = enumerate_words(golden_mean(), 2);
  REQUIRE(gm2.size() == 3);
  CHECK(gm2[0] == Word{0, 0});
  CHECK(gm2[1] == Word{0, 1});
  CHECK(gm2[2] == Word{1, 0});

  auto full2 = enumerate_words(full_shift(2), 2);
  REQUIRE(full2.size() == 4);
  CHECK(std::is_sorted(full2.begin(), full2.end()));

  auto singles = enumerate_words(full_shift(3), 1);
  REQUIRE(singles.size() == 3);
  CHECK(singles[2] == Word{2});

  SplitMix64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    Sft sft = random_sft(rng, 3);
    auto words = enumerate_words(sft, 4);
    CHECK(words.size() == count_words(sft, 4).value);
    CHECK(std::is_sorted(words.begin(), words.end()));
    for (const Word& w : words) CHECK(sft.admissible(w));
  }
}

TEST_CASE("topological entropy closed cases") {
  CHECK(topological_entropy(full_shift(2)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(topological_entropy(golden_mean()) ==
        doctest::Approx(std::log(golden)).epsilon(1e-12));
  CHECK(topological_entropy(validate_sft({{1}})) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sliding recode preserves entropy") {
  Sft gm = golden_mean();
  BlockSft b2 = recode_sliding(gm, 2);
  CHECK(b2.states.size() == 3);
  CHECK(std::fabs(topological_entropy(b2) - topological_entropy(gm)) < 1e-10);

  BlockSft full3 = recode_sliding(full_shift(2), 2);
  CHECK(full3.states.size() == 4);
  for (int i = 0; i < 4; ++i) {
    int successors = 0;
    for (int j = 0; j < 4; ++j) successors += full3.recoded.transition(i, j);
    CHECK(successors == 2);
  }

  BlockSft identity = recode_sliding(gm, 1);
  CHECK(identity.recoded.t == gm.t);

  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Sft sft = random_sft(rng, 3);
    for (int n = 2; n <= 4; ++n)
      CHECK(std::fabs(topological_entropy(recode_sliding(sft, n)) -
                      topological_entropy(sft)) < 1e-10);
  }
}

TEST_CASE("power recode multiplies entropy") {
  Sft gm = golden_mean();
  BlockSft p2 = recode_power(gm, 2);
  REQUIRE(p2.states.size() == 3);
  // states 00, 01, 10; w -> w' iff T[last(w)][first(w')], i.e. iff the
  // concatenation ww' is an admissible 4-word
  auto edge = [&](int a, int b) { return p2.recoded.transition(a, b) != 0; };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Word join = p2.states[std::size_t(a)];
      join.insert(join.end(), p2.states[std::size_t(b)].begin(),
                  p2.states[std::size_t(b)].end());
      CHECK(edge(a, b) == gm.admissible(join));
    }
  CHECK(edge(0, 2));        // 00 -> 10
  CHECK_FALSE(edge(1, 2));  // 01 -> 10 would contain the forbidden 11

  BlockSft p3 = recode_power(full_shift(2), 3);
  CHECK(p3.states.size() == 8);
  CHECK(p3.recoded.full_shift());

  SplitMix64 rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    Sft sft = random_sft(rng, 3);
    for (int n = 2; n <= 4; ++n)
      CHECK(std::fabs(topological_entropy(recode_power(sft, n)) -
                      double(n) * topological_entropy(sft)) < 1e-9);
  }
}

TEST_CASE("recode state budget") {
  CHECK_THROWS_AS((void)recode_sliding(full_shift(2), 21), Error);
  CHECK_THROWS_AS((void)recode_power(full_shift(4), 11), Error);
}

TEST_CASE("word string round trip") {
  Word w{0, 3, 11, 35};
  CHECK(word_from_string(word_to_string(w)) == w);
  CHECK(word_to_string(Word{0, 1, 0}) == "010");
}
