#ifndef SVP_POTENTIALS_HPP
#define SVP_POTENTIALS_HPP

#include <optional>
#include <string>
#include <vector>

#include "svp/matrix.hpp"
#include "svp/sft.hpp"

namespace svp {

// Ordered partition of the coordinate axes {0..d-1} into contiguous blocks.
// The list order carries meaning and differs by use:
//   - singular-value potentials (TildeTop/TildeBottom) list blocks
//     strongest-first, E_1 >= E_2 >= ... (the Section-3 convention);
//   - check_domination lists blocks weakest-first, each block dominated by
//     the next (the splitting-definition convention).
// The two orderings are deliberately both exposed; callers choose.
struct BlockSplit {
  struct Block {
    int offset = 0;
    int size = 0;
  };
  std::vector<Block> blocks;

  int total() const;
  static BlockSplit from_index_lists(int d, const std::vector<std::vector<int>>& one_based);
  std::vector<std::vector<int>> to_index_lists() const;  // 1-based
};

enum class PotentialKind { Top, Bottom, TildeTop, TildeBottom, Scalar };

// Which singular-value potential to evaluate, with sign and parameter.
//   Top:        sum of the [s] largest log singular values + fractional term
//   Bottom:     sum of the [s] smallest log singular values + fractional term
//   TildeTop:   block version of Top via per-block operator norms
//   TildeBottom:block version of Bottom via per-block minimum norms
//   Scalar:     conformal reduction, s * (1/d) log|det|
// The result is multiplied by sign.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::Top;
  double s = 1.0;
  int sign = +1;
  std::optional<BlockSplit> blocks;  // required iff kind is a Tilde variant

  void validate(int d) const;
  std::string describe() const;
};

// Per-word sequences w -> potential_log(A_w, spec) classify by behaviour
// under concatenation; certification directions depend on it.
bool is_subadditive(const PotentialSpec& spec, int d);
bool is_superadditive(const PotentialSpec& spec, int d);

// Partial sums over log-domain values sorted non-increasing: top takes the
// [s] largest plus a fractional term, bottom the [s] smallest. Fractional
// terms are dropped at integer s (the one-sided limits agree). Shared by the
// singular-value potentials and the Lyapunov free energy.
double partial_sum_top(const std::vector<double>& logs_desc, double s);
double partial_sum_bottom(const std::vector<double>& logs_desc, double s);

// Singular-value potential of a single matrix, in log units (nats).
// Tilde variants require M block-diagonal w.r.t. spec.blocks.
double potential_log(const Mat& m, const PotentialSpec& spec);
double potential_log(const ScaledMat& sm, const PotentialSpec& spec);

// One matrix per symbol of the companion SFT.
struct MatrixCocycle {
  enum class Orientation { Derivative, Contraction };
  int d = 0;
  Orientation orientation = Orientation::Derivative;
  std::vector<Mat> mats;
  std::optional<BlockSplit> blocks;  // strongest-first when present
  bool expanding = false;  // derivative orientation: every generator's
                           // singular values all exceed 1

  void validate() const;
  bool contracting() const;  // every generator's singular values all below 1
};

MatrixCocycle make_cocycle(std::vector<Mat> mats,
                           MatrixCocycle::Orientation orientation,
                           std::optional<BlockSplit> blocks = std::nullopt);

// A(x,n) = A(x_{n-1}) ... A(x_0): the rightmost factor is the first symbol.
// Products over words longer than 40 are renormalized through the scale
// factor of ScaledMat.
ScaledMat cocycle_product(const MatrixCocycle& c, const Word& w);

// Finite-length domination check. Blocks are listed weakest-first; for each
// consecutive pair the gap is
//   min over admissible words w, 1 <= |w| <= L, of
//   (1/|w|) (log m(A_w|E_{j+1}) - log ||A_w|E_j||),
// and the splitting counts as dominated at length L iff all gaps are > 0.
struct DominationReport {
  bool dominated = false;
  int length = 0;
  std::vector<double> gaps;  // one per consecutive block pair
};

DominationReport check_domination(const MatrixCocycle& c, const Sft& sft,
                                  const BlockSplit& blocks_weakest_first, int max_len);

}  // namespace svp

#endif
