#include "svp/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svp/errors.hpp"
#include "svp/util.hpp"

namespace svp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class DenseOp final : public LinOp {
 public:
  DenseOp(const Sft& sft, std::vector<double> weights)
      : sft_(sft), w_(std::move(weights)) {}

  std::size_t size() const override { return std::size_t(sft_.k); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const override {
    int k = sft_.k;
    for (int i = 0; i < k; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j)
        if (sft_.transition(i, j)) s += x[std::size_t(j)];
      y[std::size_t(i)] = w_[std::size_t(i)] * s;
    }
  }

  void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const override {
    int k = sft_.k;
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < k; ++i) {
      double z = w_[std::size_t(i)] * x[std::size_t(i)];
      if (z == 0.0) continue;
      for (int j = 0; j < k; ++j)
        if (sft_.transition(i, j)) y[std::size_t(j)] += z;
    }
  }

 private:
  Sft sft_;
  std::vector<double> w_;
};

// Sliding-block operator. Successors of a state are exactly the states whose
// (n-1)-prefix equals its (n-1)-suffix, so matvecs reduce to per-group sums
// over admissible (n-1)-words.
class SlidingOp final : public LinOp {
 public:
  SlidingOp(const BlockSft& bs, std::vector<double> weights)
      : w_(std::move(weights)) {
    const auto& states = bs.states;
    m_ = states.size();
    std::vector<Word> shorts = enumerate_words(bs.base, bs.n - 1, kStateBudget);
    groups_ = shorts.size();
    prefix_.resize(m_);
    suffix_.resize(m_);
    group_begin_.assign(groups_ + 1, 0);
    std::size_t g = 0;
    for (std::size_t a = 0; a < m_; ++a) {
      while (!std::equal(shorts[g].begin(), shorts[g].end(), states[a].begin())) {
        ++g;
        group_begin_[g] = a;
      }
      prefix_[a] = std::uint32_t(g);
      Word suf(states[a].begin() + 1, states[a].end());
      auto it = std::lower_bound(shorts.begin(), shorts.end(), suf);
      suffix_[a] = std::uint32_t(it - shorts.begin());
    }
    for (std::size_t h = g + 1; h <= groups_; ++h) group_begin_[h] = m_;
  }

  std::size_t size() const override { return m_; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const override {
    std::vector<double> r(groups_, 0.0);
    for (std::size_t u = 0; u < groups_; ++u) {
      double s = 0.0;
      for (std::size_t a = group_begin_[u]; a < group_begin_[u + 1]; ++a) s += x[a];
      r[u] = s;
    }
    for (std::size_t a = 0; a < m_; ++a) y[a] = w_[a] * r[suffix_[a]];
  }

  void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const override {
    std::vector<double> h(groups_, 0.0);
    for (std::size_t a = 0; a < m_; ++a) h[suffix_[a]] += w_[a] * x[a];
    for (std::size_t b = 0; b < m_; ++b) y[b] = h[prefix_[b]];
  }

 private:
  std::vector<double> w_;
  std::size_t m_ = 0, groups_ = 0;
  std::vector<std::uint32_t> prefix_, suffix_;
  std::vector<std::size_t> group_begin_;
};

// Power-block operator: w -> w' iff T[last(w)][first(w')].
class PowerOp final : public LinOp {
 public:
  PowerOp(const BlockSft& bs, std::vector<double> weights)
      : base_(bs.base), w_(std::move(weights)) {
    m_ = bs.states.size();
    first_.resize(m_);
    last_.resize(m_);
    for (std::size_t a = 0; a < m_; ++a) {
      first_[a] = std::uint8_t(bs.states[a].front());
      last_[a] = std::uint8_t(bs.states[a].back());
    }
  }

  std::size_t size() const override { return m_; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const override {
    int k = base_.k;
    std::vector<double> f(std::size_t(k), 0.0);
    for (std::size_t b = 0; b < m_; ++b) f[first_[b]] += x[b];
    std::vector<double> g(std::size_t(k), 0.0);
    for (int c = 0; c < k; ++c)
      for (int c2 = 0; c2 < k; ++c2)
        if (base_.transition(c, c2)) g[std::size_t(c)] += f[std::size_t(c2)];
    for (std::size_t a = 0; a < m_; ++a) y[a] = w_[a] * g[last_[a]];
  }

  void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const override {
    int k = base_.k;
    std::vector<double> f(std::size_t(k), 0.0);
    for (std::size_t a = 0; a < m_; ++a) f[last_[a]] += w_[a] * x[a];
    std::vector<double> g(std::size_t(k), 0.0);
    for (int c2 = 0; c2 < k; ++c2)
      for (int c = 0; c < k; ++c)
        if (base_.transition(c, c2)) g[std::size_t(c2)] += f[std::size_t(c)];
    for (std::size_t b = 0; b < m_; ++b) y[b] = g[first_[b]];
  }

 private:
  Sft base_;
  std::vector<double> w_;
  std::size_t m_ = 0;
  std::vector<std::uint8_t> first_, last_;
};

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::unique_ptr<LinOp> make_dense_op(const Sft& sft, const std::vector<double>& weights) {
  if (weights.size() != std::size_t(sft.k)) fail(ErrorCode::BadInput, "weight count mismatch");
  return std::make_unique<DenseOp>(sft, weights);
}

std::unique_ptr<LinOp> make_block_op(const BlockSft& bs, const std::vector<double>& weights) {
  if (weights.size() != bs.states.size()) fail(ErrorCode::BadInput, "weight count mismatch");
  if (bs.kind == BlockSft::Kind::Sliding) {
    if (bs.n == 1) return std::make_unique<DenseOp>(bs.base, weights);
    return std::make_unique<SlidingOp>(bs, weights);
  }
  return std::make_unique<PowerOp>(bs, weights);
}

double log_perron_root(const LinOp& op) {
  // Power iteration on the +1-shifted operator (primitive for irreducible
  // inputs; callers decompose reducible systems into components first).
  // Primary stop: the Collatz-Wielandt enclosure min_i (Ax)_i/x_i <= rho <=
  // max_i (Ax)_i/x_i tightens below 1e-13; successive Rayleigh quotients
  // within 1e-13 on five consecutive steps stop slow tails.
  std::size_t n = op.size();
  std::vector<double> x(n, 1.0 / std::sqrt(double(n)));
  std::vector<double> y(n);
  double estimate = 0.0, previous = -kInf;
  int streak = 0;
  for (int iter = 0; iter < 100000; ++iter) {
    op.apply(x, y);
    double rayleigh = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += x[i];  // spectral shift by +1
      rayleigh += x[i] * y[i];
    }
    double lo = kInf, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ratio = y[i] / x[i];  // x stays strictly positive under the shift
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    estimate = 0.5 * (lo + hi);
    double nrm = norm2(y);
    if (nrm == 0.0) return -kInf;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
    if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    streak = std::fabs(rayleigh - previous) < 1e-13 ? streak + 1 : 0;
    if (streak >= 5) {
      estimate = rayleigh;
      break;
    }
    previous = rayleigh;
  }
  double rho = estimate - 1.0;
  if (rho <= 0.0) return -kInf;
  return std::log(rho);
}

std::vector<double> perron_vector(const LinOp& op, bool transpose) {
  std::size_t n = op.size();
  std::vector<double> x(n, 1.0 / double(n));
  std::vector<double> y(n);
  for (int iter = 0; iter < 100000; ++iter) {
    if (transpose)
      op.apply_transpose(x, y);
    else
      op.apply(x, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += x[i];
      sum += y[i];
    }
    if (sum == 0.0) fail(ErrorCode::NonIrreducible, "operator has no positive eigenvector");
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] /= sum;
      diff = std::max(diff, std::fabs(y[i] - x[i]));
    }
    x.swap(y);
    if (diff < 1e-15) break;
  }
  return x;
}

LocallyConstantPotential LocallyConstantPotential::constant(const Sft& sft, double value) {
  LocallyConstantPotential pot;
  pot.depth = 1;
  pot.values.assign(std::size_t(sft.k), value);
  return pot;
}

LocallyConstantPotential LocallyConstantPotential::from_table(
    const Sft& sft, const std::map<Word, double>& table) {
  if (table.empty()) fail(ErrorCode::BadInput, "empty potential table");
  int depth = int(table.begin()->first.size());
  std::vector<Word> words = enumerate_words(sft, depth);
  if (table.size() != words.size())
    fail(ErrorCode::BadInput, "potential table must cover exactly the admissible words");
  LocallyConstantPotential pot;
  pot.depth = depth;
  pot.values.reserve(words.size());
  for (const Word& w : words) {
    auto it = table.find(w);
    if (it == table.end())
      fail(ErrorCode::BadInput, "potential table missing word " + word_to_string(w));
    pot.values.push_back(it->second);
  }
  return pot;
}

namespace {

// Explicit nonnegative matrix as an operator, for collapsed power blocks.
class MatOp final : public LinOp {
 public:
  MatOp(int k, std::vector<double> a) : k_(k), a_(std::move(a)) {}
  std::size_t size() const override { return std::size_t(k_); }
  void apply(const std::vector<double>& x, std::vector<double>& y) const override {
    for (int i = 0; i < k_; ++i) {
      double s = 0.0;
      for (int j = 0; j < k_; ++j) s += a_[std::size_t(i) * std::size_t(k_) + std::size_t(j)] * x[std::size_t(j)];
      y[std::size_t(i)] = s;
    }
  }
  void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const override {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < k_; ++i)
      for (int j = 0; j < k_; ++j)
        y[std::size_t(j)] += a_[std::size_t(i) * std::size_t(k_) + std::size_t(j)] * x[std::size_t(i)];
  }

 private:
  int k_;
  std::vector<double> a_;
};

// log rho of an explicit nonnegative matrix: decompose into strongly
// connected components of the positive-entry digraph, run the engine per
// component, take the max (the spectral radius of a reducible matrix is the
// max over its irreducible diagonal blocks).
double matrix_log_rho(int k, const std::vector<double>& a) {
  auto edge = [&](int i, int j) {
    return a[std::size_t(i) * std::size_t(k) + std::size_t(j)] > 0.0;
  };
  double best = -kInf;
  for (const auto& comp : scc_components(k, edge)) {
    if (comp.size() == 1) {
      double self = a[std::size_t(comp[0]) * std::size_t(k) + std::size_t(comp[0])];
      if (self > 0.0) best = std::max(best, std::log(self));
      continue;
    }
    int m = int(comp.size());
    std::vector<double> sub(std::size_t(m) * std::size_t(m));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        sub[std::size_t(i) * std::size_t(m) + std::size_t(j)] =
            a[std::size_t(comp[std::size_t(i)]) * std::size_t(k) + std::size_t(comp[std::size_t(j)])];
    best = std::max(best, log_perron_root(MatOp(m, std::move(sub))));
  }
  return best;
}

// dense depth-1 pressure; zero weights may disconnect the digraph, so the
// component decomposition runs on the weight-masked edges
double dense_weighted_log_rho(const Sft& sft, const std::vector<double>& w) {
  auto edge = [&](int i, int j) { return sft.transition(i, j) && w[std::size_t(i)] > 0.0; };
  double best = -kInf;
  for (const auto& comp : scc_components(sft.k, edge)) {
    if (comp.size() == 1) {
      int c = comp[0];
      if (sft.transition(c, c) && w[std::size_t(c)] > 0.0)
        best = std::max(best, std::log(w[std::size_t(c)]));
      continue;
    }
    Sft sub = restrict_sft(sft, comp);
    std::vector<double> sw;
    for (int c : comp) sw.push_back(w[std::size_t(c)]);
    best = std::max(best, log_perron_root(DenseOp(sub, std::move(sw))));
  }
  return best;
}

double max_finite_shift(const std::vector<double>& logw) {
  double shift = -kInf;
  for (double v : logw) shift = std::max(shift, v);
  return shift;
}

std::vector<double> exp_shifted(const std::vector<double>& logw, double shift) {
  std::vector<double> w(logw.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = (logw[i] == -kInf) ? 0.0 : std::exp(logw[i] - shift);
  return w;
}

}  // namespace

double weighted_pressure(const Sft& sft, const std::vector<double>& logw) {
  if (logw.size() != std::size_t(sft.k)) fail(ErrorCode::BadInput, "weight count mismatch");
  double shift = max_finite_shift(logw);
  if (shift == -kInf) return -kInf;
  return shift + dense_weighted_log_rho(sft, exp_shifted(logw, shift));
}

double weighted_pressure(const BlockSft& bs, const std::vector<double>& logw) {
  if (logw.size() != bs.states.size()) fail(ErrorCode::BadInput, "weight count mismatch");
  if (bs.n == 1) return weighted_pressure(bs.base, logw);
  double shift = max_finite_shift(logw);
  if (shift == -kInf) return -kInf;

  if (bs.kind == BlockSft::Kind::Power) {
    // The weighted power-block matrix factors as D P Q with P[w][c] =
    // T[last(w)][c] and Q[c][w'] = [first(w') = c]; its nonzero spectrum
    // equals that of the k x k matrix (Q D P)[c][c'] =
    // sum_{first(w)=c} weight(w) T[last(w)][c'].
    int k = bs.base.k;
    std::vector<double> g(std::size_t(k) * std::size_t(k), 0.0);
    for (std::size_t a = 0; a < bs.states.size(); ++a) {
      if (logw[a] == -kInf) continue;
      double wa = std::exp(logw[a] - shift);
      int first = bs.states[a].front(), last = bs.states[a].back();
      for (int c = 0; c < k; ++c)
        if (bs.base.transition(last, c))
          g[std::size_t(first) * std::size_t(k) + std::size_t(c)] += wa;
    }
    return shift + matrix_log_rho(k, g);
  }

  if (bs.base.irreducible) {
    // sliding recodings of irreducible systems stay irreducible; zero
    // weights can still disconnect the digraph, which the dense component
    // path handles exactly
    bool finite = std::all_of(logw.begin(), logw.end(),
                              [](double v) { return v != -kInf; });
    if (finite) return shift + log_perron_root(SlidingOp(bs, exp_shifted(logw, shift)));
    if (bs.has_dense())
      return shift + dense_weighted_log_rho(bs.recoded, exp_shifted(logw, shift));
    fail(ErrorCode::BadInput, "zero weights on a large sliding recoding");
  }
  // reducible base: restrict to base components (block-graph cycles live
  // inside a single base component)
  double best = -kInf;
  for (const auto& comp : sft_components(bs.base)) {
    if (comp.size() == 1 && !bs.base.transition(comp[0], comp[0])) continue;
    Sft sub = restrict_sft(bs.base, comp);
    BlockSft sub_bs = recode_sliding(sub, bs.n);
    std::vector<double> sub_logw(sub_bs.states.size());
    Word orig;
    for (std::size_t i = 0; i < sub_bs.states.size(); ++i) {
      const Word& sw = sub_bs.states[i];
      orig.assign(sw.size(), 0);
      for (std::size_t j = 0; j < sw.size(); ++j)
        orig[j] = comp[std::size_t(sw[j])];
      long r = bs.state_rank(orig);
      sub_logw[i] = logw[std::size_t(r)];
    }
    best = std::max(best, weighted_pressure(sub_bs, sub_logw));
  }
  return best;
}

double additive_pressure(const Sft& sft, const LocallyConstantPotential& pot) {
  if (pot.depth == 1) {
    if (pot.values.size() != std::size_t(sft.k))
      fail(ErrorCode::BadInput, "potential size mismatch");
    return weighted_pressure(sft, pot.values);
  }
  BlockSft bs = recode_sliding(sft, pot.depth);
  if (pot.values.size() != bs.states.size())
    fail(ErrorCode::BadInput, "potential size mismatch");
  return weighted_pressure(bs, pot.values);
}

double topological_entropy(const Sft& sft) {
  return additive_pressure(sft, LocallyConstantPotential::constant(sft, 0.0));
}

double topological_entropy(const BlockSft& bs) {
  std::vector<double> w(bs.states.size(), 0.0);
  return weighted_pressure(bs, w);
}

void validate_markov(const MarkovMeasure& mm, const Sft* support) {
  int k = mm.k;
  if (int(mm.pi.size()) != k || mm.p.size() != std::size_t(k) * std::size_t(k))
    fail(ErrorCode::IncompatibleMeasure, "measure dimension mismatch");
  double pisum = 0.0;
  for (int i = 0; i < k; ++i) {
    double row = 0.0;
    for (int j = 0; j < k; ++j) {
      double v = mm.prob(i, j);
      if (v < 0.0) fail(ErrorCode::IncompatibleMeasure, "negative transition probability");
      if (support && v > 0.0 && !support->transition(i, j))
        fail(ErrorCode::IncompatibleMeasure, "measure charges a forbidden transition");
      row += v;
    }
    if (std::fabs(row - 1.0) > 1e-12)
      fail(ErrorCode::IncompatibleMeasure, "row " + std::to_string(i) + " does not sum to 1");
    pisum += mm.pi[std::size_t(i)];
  }
  if (std::fabs(pisum - 1.0) > 1e-12)
    fail(ErrorCode::IncompatibleMeasure, "pi does not sum to 1");
  for (int j = 0; j < k; ++j) {
    double v = 0.0;
    for (int i = 0; i < k; ++i) v += mm.pi[std::size_t(i)] * mm.prob(i, j);
    if (std::fabs(v - mm.pi[std::size_t(j)]) > 1e-12)
      fail(ErrorCode::IncompatibleMeasure, "pi is not stationary");
  }
}

std::vector<double> stationary_distribution(int k, const std::vector<double>& p) {
  std::vector<double> pi(std::size_t(k), 1.0 / double(k));
  std::vector<double> next(std::size_t(k), 0.0);
  for (int iter = 0; iter < 1000000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < k; ++i) {
      double v = pi[std::size_t(i)];
      if (v == 0.0) continue;
      for (int j = 0; j < k; ++j)
        next[std::size_t(j)] += v * p[std::size_t(i) * std::size_t(k) + std::size_t(j)];
    }
    double sum = 0.0;
    for (double v : next) sum += v;
    double diff = 0.0;
    for (int j = 0; j < k; ++j) {
      next[std::size_t(j)] /= sum;
      diff = std::max(diff, std::fabs(next[std::size_t(j)] - pi[std::size_t(j)]));
    }
    pi.swap(next);
    if (diff < 1e-16) break;
  }
  return pi;
}

double markov_entropy(const MarkovMeasure& mm) {
  double h = 0.0;
  for (int i = 0; i < mm.k; ++i)
    for (int j = 0; j < mm.k; ++j) {
      double v = mm.prob(i, j);
      if (v > 0.0) h -= mm.pi[std::size_t(i)] * v * std::log(v);
    }
  return h;
}

GibbsResult rpf_gibbs(const Sft& sft, const LocallyConstantPotential& pot) {
  if (!sft.irreducible) fail(ErrorCode::NonIrreducible, "rpf_gibbs needs an irreducible SFT");
  GibbsResult g;
  g.blocks = recode_sliding(sft, pot.depth);
  std::size_t m = g.blocks.states.size();
  if (!g.blocks.has_dense())
    fail(ErrorCode::StateBudgetExceeded, "Gibbs construction needs a dense recoding");
  if (pot.values.size() != m) fail(ErrorCode::BadInput, "potential size mismatch");
  g.state_pot = pot.values;

  double shift = *std::max_element(pot.values.begin(), pot.values.end());
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = std::exp(pot.values[i] - shift);
  std::unique_ptr<LinOp> op = make_block_op(g.blocks, w);
  g.pressure = shift + log_perron_root(*op);
  g.right = perron_vector(*op, false);
  g.left = perron_vector(*op, true);
  double inner = 0.0;
  for (std::size_t i = 0; i < m; ++i) inner += g.left[i] * g.right[i];
  for (std::size_t i = 0; i < m; ++i) g.left[i] /= inner;

  // induced stationary chain: P[a][b] = M[a][b] h[b] / (rho h[a])
  const Sft& rec = g.blocks.recoded;
  g.measure.k = int(m);
  g.measure.p.assign(m * m, 0.0);
  g.measure.pi.assign(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < m; ++b) {
      if (!rec.t[a * m + b]) continue;
      double v = std::exp(pot.values[a] - g.pressure) * g.right[b] / g.right[a];
      g.measure.p[a * m + b] = v;
      row += v;
    }
    for (std::size_t b = 0; b < m; ++b) g.measure.p[a * m + b] /= row;
  }
  double pisum = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    g.measure.pi[a] = g.left[a] * g.right[a];
    pisum += g.measure.pi[a];
  }
  for (std::size_t a = 0; a < m; ++a) g.measure.pi[a] /= pisum;

  // tight two-sided constant: the cylinder ratio is
  // nu[s_first] * h[s_last] * exp(depth*P - pot(s_last))
  double max_log = -kInf;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double lr = std::log(g.left[a]) + std::log(g.right[b]) + pot.depth * g.pressure -
                  pot.values[b];
      max_log = std::max(max_log, std::fabs(lr));
    }
  g.gibbs_constant = std::exp(max_log);
  return g;
}

double cylinder_mass(const GibbsResult& g, const Word& u) {
  int m = g.blocks.n;
  if (int(u.size()) < m) fail(ErrorCode::BadInput, "cylinder shorter than potential depth");
  std::size_t nstates = g.blocks.states.size();
  long prev = -1;
  double mass = 0.0;
  for (std::size_t i = 0; i + std::size_t(m) <= u.size(); ++i) {
    Word window(u.begin() + long(i), u.begin() + long(i) + m);
    long s = g.blocks.state_rank(window);
    if (s < 0) return 0.0;
    if (prev < 0) {
      mass = g.measure.pi[std::size_t(s)];
    } else {
      double p = g.measure.p[std::size_t(prev) * nstates + std::size_t(s)];
      if (p == 0.0) return 0.0;
      mass *= p;
    }
    prev = s;
  }
  return mass;
}

double window_sum(const GibbsResult& g, const Word& u) {
  int m = g.blocks.n;
  if (int(u.size()) < m) fail(ErrorCode::BadInput, "cylinder shorter than potential depth");
  double s = 0.0;
  for (std::size_t i = 0; i + std::size_t(m) <= u.size(); ++i) {
    Word window(u.begin() + long(i), u.begin() + long(i) + m);
    long r = g.blocks.state_rank(window);
    if (r < 0) fail(ErrorCode::BadInput, "inadmissible cylinder");
    s += g.state_pot[std::size_t(r)];
  }
  return s;
}

}  // namespace svp
