#include "svp/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "svp/errors.hpp"

namespace svp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int BlockSplit::total() const {
  int t = 0;
  for (const Block& b : blocks) t += b.size;
  return t;
}

BlockSplit BlockSplit::from_index_lists(int d, const std::vector<std::vector<int>>& lists) {
  BlockSplit out;
  std::vector<char> seen(std::size_t(d), 0);
  for (const auto& idx : lists) {
    if (idx.empty()) fail(ErrorCode::BlockMismatch, "empty block");
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      int v = sorted[i];
      if (v < 1 || v > d) fail(ErrorCode::BlockMismatch, "block index out of range");
      if (seen[std::size_t(v - 1)]) fail(ErrorCode::BlockMismatch, "repeated block index");
      seen[std::size_t(v - 1)] = 1;
      if (i > 0 && sorted[i] != sorted[i - 1] + 1)
        fail(ErrorCode::BlockMismatch, "blocks must be contiguous index ranges");
    }
    out.blocks.push_back({sorted.front() - 1, int(sorted.size())});
  }
  if (out.total() != d) fail(ErrorCode::BlockMismatch, "block sizes must sum to the dimension");
  return out;
}

std::vector<std::vector<int>> BlockSplit::to_index_lists() const {
  std::vector<std::vector<int>> out;
  for (const Block& b : blocks) {
    std::vector<int> idx;
    for (int i = 0; i < b.size; ++i) idx.push_back(b.offset + i + 1);
    out.push_back(idx);
  }
  return out;
}

void PotentialSpec::validate(int d) const {
  if (!(s >= 0.0 && s <= double(d)))
    fail(ErrorCode::SOutOfRange, "parameter must lie in [0, d]");
  if (sign != 1 && sign != -1) fail(ErrorCode::BadInput, "sign must be +1 or -1");
  bool tilde = kind == PotentialKind::TildeTop || kind == PotentialKind::TildeBottom;
  if (tilde && !blocks) fail(ErrorCode::BlockMismatch, "tilde potential needs blocks");
  if (!tilde && blocks) fail(ErrorCode::BlockMismatch, "blocks only apply to tilde potentials");
  if (blocks && blocks->total() != d)
    fail(ErrorCode::BlockMismatch, "block sizes must sum to the dimension");
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case PotentialKind::Top: os << "top"; break;
    case PotentialKind::Bottom: os << "bottom"; break;
    case PotentialKind::TildeTop: os << "tilde_top"; break;
    case PotentialKind::TildeBottom: os << "tilde_bottom"; break;
    case PotentialKind::Scalar: os << "scalar"; break;
  }
  os << (sign > 0 ? ":+1" : ":-1");
  return os.str();
}

bool is_subadditive(const PotentialSpec& spec, int d) {
  if (spec.kind == PotentialKind::Scalar || d == 1) return true;  // exactly additive
  switch (spec.kind) {
    case PotentialKind::Top:
    case PotentialKind::TildeTop:
      return spec.sign > 0;
    case PotentialKind::Bottom:
    case PotentialKind::TildeBottom:
      return spec.sign < 0;
    default:
      return true;
  }
}

bool is_superadditive(const PotentialSpec& spec, int d) {
  if (spec.kind == PotentialKind::Scalar || d == 1) return true;
  switch (spec.kind) {
    case PotentialKind::Top:
    case PotentialKind::TildeTop:
      return spec.sign < 0;
    case PotentialKind::Bottom:
    case PotentialKind::TildeBottom:
      return spec.sign > 0;
    default:
      return true;
  }
}

namespace {

double safe_log(double v) { return v > 0.0 ? std::log(v) : -kInf; }

std::vector<double> log_singular_values(const Mat& m) {
  std::vector<double> a = singular_values(m);
  for (double& v : a) v = safe_log(v);
  return a;
}

}  // namespace

double partial_sum_top(const std::vector<double>& logs_desc, double s) {
  int whole = int(std::floor(s));
  double frac = s - double(whole);
  double acc = 0.0;
  for (int i = 0; i < whole; ++i) acc += logs_desc[std::size_t(i)];
  if (frac > 0.0) acc += frac * logs_desc[std::size_t(whole)];
  return acc;
}

double partial_sum_bottom(const std::vector<double>& logs_desc, double t) {
  int d = int(logs_desc.size());
  int whole = int(std::floor(t));
  double frac = t - double(whole);
  double acc = 0.0;
  for (int i = d - whole; i < d; ++i) acc += logs_desc[std::size_t(i)];
  if (frac > 0.0) acc += frac * logs_desc[std::size_t(d - whole - 1)];
  return acc;
}

namespace {

Mat block_of(const Mat& m, const BlockSplit::Block& b) {
  Mat sub(b.size);
  for (int i = 0; i < b.size; ++i)
    for (int j = 0; j < b.size; ++j) sub.at(i, j) = m.at(b.offset + i, b.offset + j);
  return sub;
}

void require_block_diagonal(const Mat& m, const BlockSplit& split) {
  double scale = std::max(1.0, m.max_abs());
  double off = 0.0;
  for (const auto& b : split.blocks)
    for (int i = b.offset; i < b.offset + b.size; ++i)
      for (int j = 0; j < m.dim(); ++j)
        if (j < b.offset || j >= b.offset + b.size) off += std::fabs(m.at(i, j));
  if (off > 1e-12 * scale)
    fail(ErrorCode::BlockMismatch, "matrix is not block-diagonal for the given splitting");
}

// per-block operator norm (largest singular value of the diagonal block)
std::vector<double> block_norms(const Mat& m, const BlockSplit& split, bool minimum) {
  std::vector<double> out;
  out.reserve(split.blocks.size());
  for (const auto& b : split.blocks) {
    std::vector<double> a = singular_values(block_of(m, b));
    out.push_back(minimum ? a.back() : a.front());
  }
  return out;
}

// Leading-blocks form: sum_{j<=D} m_j log||M|E_j|| + (s - r_D) log||M|E_{D+1}||,
// blocks listed strongest-first, r_j = m_1 + ... + m_j.
double tilde_top_value(const Mat& m, const BlockSplit& split, double s) {
  std::vector<double> norms = block_norms(m, split, false);
  double acc = 0.0, r = 0.0;
  std::size_t j = 0;
  for (; j < split.blocks.size(); ++j) {
    double mj = double(split.blocks[j].size);
    if (s >= r + mj) {
      acc += mj * safe_log(norms[j]);
      r += mj;
    } else {
      break;
    }
  }
  if (j < split.blocks.size() && s > r) acc += (s - r) * safe_log(norms[j]);
  return acc;
}

// Trailing-blocks form with minimum norms: sum over the last D blocks of
// m_j log m(M|E_j) + (t - l_D) log m(M|E_{k-D}), l_d summing trailing sizes.
double tilde_bottom_value(const Mat& m, const BlockSplit& split, double t) {
  std::vector<double> mins = block_norms(m, split, true);
  double acc = 0.0, l = 0.0;
  std::size_t taken = 0;
  std::size_t k = split.blocks.size();
  for (; taken < k; ++taken) {
    std::size_t j = k - 1 - taken;
    double mj = double(split.blocks[j].size);
    if (t >= l + mj) {
      acc += mj * safe_log(mins[j]);
      l += mj;
    } else {
      break;
    }
  }
  if (taken < k && t > l) acc += (t - l) * safe_log(mins[k - 1 - taken]);
  return acc;
}

}  // namespace

double potential_log(const Mat& m, const PotentialSpec& spec) {
  spec.validate(m.dim());
  double value = 0.0;
  switch (spec.kind) {
    case PotentialKind::Top:
      value = partial_sum_top(log_singular_values(m), spec.s);
      break;
    case PotentialKind::Bottom:
      value = partial_sum_bottom(log_singular_values(m), spec.s);
      break;
    case PotentialKind::TildeTop:
      require_block_diagonal(m, *spec.blocks);
      value = tilde_top_value(m, *spec.blocks, spec.s);
      break;
    case PotentialKind::TildeBottom:
      require_block_diagonal(m, *spec.blocks);
      value = tilde_bottom_value(m, *spec.blocks, spec.s);
      break;
    case PotentialKind::Scalar: {
      double det = std::fabs(determinant(m));
      value = spec.s * safe_log(det) / double(m.dim());
      break;
    }
  }
  return spec.sign * value;
}

double potential_log(const ScaledMat& sm, const PotentialSpec& spec) {
  // scaling M by c shifts every singular-value potential by s log c
  return potential_log(sm.m, spec) + double(spec.sign) * spec.s * sm.log_scale;
}

void MatrixCocycle::validate() const {
  if (mats.empty()) fail(ErrorCode::BadInput, "cocycle needs at least one generator");
  for (const Mat& m : mats) {
    if (m.dim() != d) fail(ErrorCode::BadInput, "generator dimension mismatch");
    if (!m.finite()) fail(ErrorCode::BadInput, "non-finite generator entries");
    if (std::fabs(determinant(m)) <= 1e-300)
      fail(ErrorCode::Singular, "cocycle generators must be invertible");
  }
  if (blocks && blocks->total() != d)
    fail(ErrorCode::BlockMismatch, "block sizes must sum to the dimension");
}

bool MatrixCocycle::contracting() const {
  for (const Mat& m : mats)
    if (singular_values(m).front() >= 1.0) return false;
  return true;
}

MatrixCocycle make_cocycle(std::vector<Mat> mats, MatrixCocycle::Orientation orientation,
                           std::optional<BlockSplit> blocks) {
  MatrixCocycle c;
  c.d = mats.empty() ? 0 : mats.front().dim();
  c.orientation = orientation;
  c.mats = std::move(mats);
  c.blocks = std::move(blocks);
  c.validate();
  if (orientation == MatrixCocycle::Orientation::Derivative) {
    c.expanding = true;
    for (const Mat& m : c.mats)
      if (singular_values(m).back() <= 1.0) c.expanding = false;
  }
  return c;
}

ScaledMat cocycle_product(const MatrixCocycle& c, const Word& w) {
  if (w.empty()) fail(ErrorCode::EmptyWord, "cocycle product of the empty word");
  ScaledMat acc;
  acc.m = c.mats[std::size_t(w.front())];
  for (std::size_t i = 1; i < w.size(); ++i) {
    acc.m = c.mats[std::size_t(w[i])] * acc.m;
    if (i % 40 == 0) acc.renormalize();
  }
  return acc;
}

DominationReport check_domination(const MatrixCocycle& c, const Sft& sft,
                                  const BlockSplit& blocks_weakest_first, int max_len) {
  if (blocks_weakest_first.total() != c.d)
    fail(ErrorCode::BlockMismatch, "block sizes must sum to the dimension");
  for (const Mat& m : c.mats) require_block_diagonal(m, blocks_weakest_first);
  if (count_words(sft, max_len).as_double() > 2e6)
    fail(ErrorCode::BudgetExceeded, "domination check over budget");

  std::size_t pairs = blocks_weakest_first.blocks.size() - 1;
  DominationReport report;
  report.length = max_len;
  report.gaps.assign(pairs, kInf);

  // depth-first walk with the running product maintained on a stack
  std::vector<ScaledMat> stack;
  visit_words(
      sft, max_len,
      [&](int symbol, int depth) {
        ScaledMat top;
        if (stack.empty()) {
          top.m = c.mats[std::size_t(symbol)];
        } else {
          top.m = c.mats[std::size_t(symbol)] * stack.back().m;
          top.log_scale = stack.back().log_scale;
        }
        top.renormalize();
        stack.push_back(top);
        for (std::size_t j = 0; j < pairs; ++j) {
          Mat weak = block_of(top.m, blocks_weakest_first.blocks[j]);
          Mat strong = block_of(top.m, blocks_weakest_first.blocks[j + 1]);
          double lo = std::log(singular_values(strong).back());
          double hi = std::log(singular_values(weak).front());
          report.gaps[j] = std::min(report.gaps[j], (lo - hi) / double(depth));
        }
        return true;
      },
      [&]() { stack.pop_back(); });

  report.dominated = true;
  for (double g : report.gaps)
    if (!(g > 0.0)) report.dominated = false;
  return report;
}

}  // namespace svp
