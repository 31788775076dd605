#ifndef SVP_SFT_HPP
#define SVP_SFT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace svp {

using Word = std::vector<int>;

// Subshift of finite type on symbols {0..k-1}. transition(i,j) = 1 means
// symbol j may follow symbol i.
struct Sft {
  int k = 0;
  std::vector<std::uint8_t> t;  // row-major k*k, entries 0/1
  bool irreducible = false;     // transition digraph strongly connected

  std::uint8_t transition(int i, int j) const {
    return t[std::size_t(i) * std::size_t(k) + std::size_t(j)];
  }
  bool full_shift() const;
  bool admissible(const Word& w) const;
};

// Validates the 0/1 transition matrix (square, every row and column has a 1)
// and computes the irreducibility flag.
Sft validate_sft(const std::vector<std::vector<int>>& rows);
Sft full_shift(int k);

struct WordCount {
  bool exact = true;       // false when the count exceeded 2^63-1
  std::uint64_t value = 0; // valid when exact
  double approx = 0.0;     // always valid

  double as_double() const { return exact ? double(value) : approx; }
};

// Number of admissible words of length n (= sum of entries of T^(n-1)).
WordCount count_words(const Sft& sft, int n);

// All admissible n-words in lexicographic order. Iteration order is part of
// the contract. Budget-guarded; use visit_words for streaming traversal.
std::vector<Word> enumerate_words(const Sft& sft, int n,
                                  std::uint64_t budget = std::uint64_t(1) << 22);

// Depth-first lexicographic traversal of the admissible word tree.
// enter(symbol, depth) is called when a symbol is appended (depth = new word
// length); if it returns false the subtree is pruned. leave() unwinds.
void visit_words(const Sft& sft, int n,
                 const std::function<bool(int, int)>& enter,
                 const std::function<void()>& leave);

// Block recodings. States of the recoded SFT are the admissible n-words of
// the base SFT in lexicographic order, listed in `states`. The dense
// recoded transition matrix is materialized only below kDenseStates;
// transfer operators use the implicit block structure above that.
struct BlockSft {
  enum class Kind { Sliding, Power };
  Sft base;
  int n = 1;
  Kind kind = Kind::Sliding;
  std::vector<Word> states;
  Sft recoded;  // valid iff has_dense()

  bool has_dense() const { return recoded.k > 0; }
  // lexicographic rank of an admissible n-word among the states, -1 if absent
  long state_rank(const Word& w) const;
};

inline constexpr std::uint64_t kDenseStates = 4096;

inline constexpr std::uint64_t kStateBudget = std::uint64_t(1) << 20;

// Sliding (higher-block) recoding: w -> w' allowed iff they overlap in n-1
// symbols. Topologically conjugate to the base, so entropy is preserved.
BlockSft recode_sliding(const Sft& sft, int n);

// n-th power recoding: w -> w' allowed iff the last symbol of w may precede
// the first symbol of w'. Entropy is n times the base entropy.
BlockSft recode_power(const Sft& sft, int n);

std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s);

// Strongly connected components of the transition digraph, each sorted
// ascending, listed deterministically.
std::vector<std::vector<int>> sft_components(const Sft& sft);

// Restriction to a symbol subset (relabelled 0..|symbols|-1 in the given
// order). Throws when the restriction has an empty row or column, i.e. the
// subset carries no two-sided orbits.
Sft restrict_sft(const Sft& sft, const std::vector<int>& symbols);

}  // namespace svp

#endif
