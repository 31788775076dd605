#include "svp/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "svp/errors.hpp"

namespace svp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* bracket_target_name(BracketTarget t) {
  switch (t) {
    case BracketTarget::HausdorffRepeller: return "hausdorff_repeller";
    case BracketTarget::BoxRepeller: return "box_repeller";
    case BracketTarget::AffinityIfs: return "affinity_ifs";
    case BracketTarget::Caratheodory: return "caratheodory";
  }
  return "?";
}

RootResult bowen_root(const PressureFunctionHandle& handle, double tol) {
  RootResult out;
  std::map<double, double> seen;
  auto eval = [&](double s) {
    double v = handle.eval(s).value;
    seen[s] = v;
    return v;
  };
  double at0 = eval(0.0);
  if (at0 <= 0.0) {
    out.value = 0.0;
    out.flag = RootResult::Flag::SaturatedLow;
    return out;
  }
  double atd = eval(handle.dmax);
  if (atd >= 0.0) {
    out.value = handle.dmax;
    out.flag = RootResult::Flag::SaturatedHigh;
    return out;
  }
  double lo = 0.0, hi = handle.dmax;
  for (int iter = 0; iter < 200 && (hi - lo) >= tol; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (eval(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.value = 0.5 * (lo + hi);
  out.flag = RootResult::Flag::Bracketed;
  // handles are pressure functions, strictly decreasing in s; spot-check
  double prev = kInf;
  for (const auto& [s, v] : seen) {
    if (v > prev + 1e-9) out.monotone = false;
    prev = v;
  }
  return out;
}

namespace {

const char* flag_name(RootResult::Flag f) {
  switch (f) {
    case RootResult::Flag::Bracketed: return "";
    case RootResult::Flag::SaturatedLow: return "saturated_low";
    case RootResult::Flag::SaturatedHigh: return "saturated_high";
  }
  return "";
}

struct SideResult {
  double value = 0.0;
  std::string provenance;
  std::vector<RootTrace> trace;
  std::set<std::string> flags;
  bool have = false;
};

// roots of a per-level estimator family; keep = min or max over levels
SideResult root_over_levels(const CocycleSystem& system, PotentialKind kind, int sign,
                            const std::vector<int>& levels, const std::string& estimator,
                            bool keep_min, unsigned threads) {
  SideResult side;
  for (int level : levels) {
    PressureFunctionHandle handle;
    handle.dmax = double(system.cocycle.d);
    handle.label = estimator + "@" + std::to_string(level);
    handle.eval = [&, level](double s) -> PressureEstimate {
      PotentialSpec spec;
      spec.kind = kind;
      spec.sign = sign;
      spec.s = s;
      if (kind == PotentialKind::TildeTop || kind == PotentialKind::TildeBottom)
        spec.blocks = system.cocycle.blocks;
      if (estimator == "block_pressure") return block_pressure(system, spec, level, threads);
      if (estimator == "super_power_lower")
        return super_power_lower(system, spec, level, threads);
      return cylinder_sum(system, spec, level, threads);
    };
    RootResult r = bowen_root(handle);
    RootTrace t;
    t.estimator = estimator;
    t.level = level;
    t.root = r.value;
    t.flag = flag_name(r.flag);
    side.trace.push_back(t);
    if (r.flag != RootResult::Flag::Bracketed) side.flags.insert(std::string(flag_name(r.flag)));
    if (!r.monotone) side.flags.insert("non_monotone_handle");
    bool better = !side.have || (keep_min ? r.value < side.value : r.value > side.value);
    if (better) {
      side.value = r.value;
      side.provenance = handle.label;
      side.have = true;
    }
  }
  return side;
}

}  // namespace

DimensionBracket repeller_bracket(const CocycleSystem& system, const Schedule& schedule,
                                  unsigned threads) {
  system.validate();
  if (system.cocycle.orientation != MatrixCocycle::Orientation::Derivative ||
      !system.cocycle.expanding)
    fail(ErrorCode::NotExpanding, "repeller bracket needs an expanding derivative cocycle");

  DimensionBracket bracket;
  bracket.target = BracketTarget::HausdorffRepeller;

  // upper: P_sub(t) root from sub-additive upper estimates (each level's
  // estimate dominates the pressure pointwise, so each root dominates t*)
  SideResult upper = root_over_levels(system, PotentialKind::Bottom, -1,
                                      schedule.block_levels, "block_pressure", true, threads);
  // lower: P_sup(s) root from super-additive lower estimates; the k = 0
  // one-step root stays in the trace
  std::vector<int> power = schedule.power_levels;
  if (std::find(power.begin(), power.end(), 0) == power.end()) power.insert(power.begin(), 0);
  SideResult lower = root_over_levels(system, PotentialKind::Top, -1, power,
                                      "super_power_lower", false, threads);

  bracket.upper = upper.value;
  bracket.upper_provenance = upper.provenance;
  bracket.lower = lower.value;
  bracket.lower_provenance = lower.provenance;
  for (const auto& t : upper.trace) bracket.trace.push_back(t);
  for (const auto& t : lower.trace) bracket.trace.push_back(t);
  for (const auto& f : upper.flags) bracket.flags.push_back("upper_" + f);
  for (const auto& f : lower.flags) bracket.flags.push_back("lower_" + f);
  return bracket;
}

DimensionBracket caratheodory_dimension(const CocycleSystem& system, const Schedule& schedule,
                                        unsigned threads) {
  system.validate();
  if (system.cocycle.orientation != MatrixCocycle::Orientation::Derivative ||
      !system.cocycle.expanding)
    fail(ErrorCode::NotExpanding, "Caratheodory dimension needs an expanding cocycle");
  SideResult upper = root_over_levels(system, PotentialKind::Bottom, -1,
                                      schedule.block_levels, "block_pressure", true, threads);
  DimensionBracket out;
  out.target = BracketTarget::Caratheodory;
  out.lower = out.upper = upper.value;
  out.lower_provenance = out.upper_provenance = upper.provenance;
  out.trace = upper.trace;
  for (const auto& f : upper.flags) out.flags.push_back(f);
  return out;
}

namespace {

// gibbs measure of the depth-1 additive proxy potential g_i = pot(A_i, spec)
MarkovMeasure proxy_measure(const CocycleSystem& system, const PotentialSpec& spec) {
  LocallyConstantPotential pot;
  pot.depth = 1;
  for (const Mat& m : system.cocycle.mats) pot.values.push_back(potential_log(m, spec));
  return rpf_gibbs(system.sft, pot).measure;
}

MarkovMeasure uniform_measure(const Sft& sft) {
  // maximal-entropy-like reference: row-normalized transition matrix
  MarkovMeasure mm;
  mm.k = sft.k;
  mm.p.assign(std::size_t(sft.k) * std::size_t(sft.k), 0.0);
  for (int i = 0; i < sft.k; ++i) {
    double row = 0.0;
    for (int j = 0; j < sft.k; ++j) row += sft.transition(i, j);
    for (int j = 0; j < sft.k; ++j)
      if (sft.transition(i, j))
        mm.p[std::size_t(i) * std::size_t(sft.k) + std::size_t(j)] = 1.0 / row;
  }
  mm.pi = stationary_distribution(sft.k, mm.p);
  return mm;
}

}  // namespace

DimensionBracket affinity_dimension(const CocycleSystem& system, const Schedule& schedule,
                                    unsigned threads) {
  system.validate();
  if (system.cocycle.orientation != MatrixCocycle::Orientation::Contraction ||
      !system.cocycle.contracting())
    fail(ErrorCode::NotContracting, "affinity dimension needs a strictly contracting cocycle");

  DimensionBracket bracket;
  bracket.target = BracketTarget::AffinityIfs;

  SideResult upper = root_over_levels(system, PotentialKind::Top, +1, schedule.block_levels,
                                      "block_pressure", true, threads);
  bracket.upper = upper.value;
  bracket.upper_provenance = upper.provenance;
  for (const auto& t : upper.trace) bracket.trace.push_back(t);
  for (const auto& f : upper.flags) bracket.flags.push_back("upper_" + f);

  // lower side: variational free energy over a fixed measure family; the
  // Lyapunov path is exact for diagonal cocycles and Monte Carlo otherwise
  PotentialSpec proxy_spec;
  proxy_spec.kind = PotentialKind::Top;
  proxy_spec.sign = +1;
  proxy_spec.s = std::min(std::max(bracket.upper, 0.0), double(system.cocycle.d));
  std::vector<MarkovMeasure> candidates{uniform_measure(system.sft)};
  candidates.push_back(proxy_measure(system, proxy_spec));

  std::vector<LyapunovSpectrum> spectra;
  bool exact = true;
  for (const auto& mu : candidates) {
    LyapunovSpectrum ls = lyapunov_spectrum(system, mu, 200, 2000, 7);
    exact = exact && ls.exact;
    spectra.push_back(ls);
  }

  PressureFunctionHandle lower_handle;
  lower_handle.dmax = double(system.cocycle.d);
  lower_handle.label = exact ? "free_energy_exact" : "free_energy_mc";
  lower_handle.eval = [&](double s) -> PressureEstimate {
    PotentialSpec spec;
    spec.kind = PotentialKind::Top;
    spec.sign = +1;
    spec.s = s;
    double best = -kInf;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      best = std::max(best, free_energy(system, candidates[i], spec, spectra[i]));
    PressureEstimate est;
    est.value = best;
    est.estimator = lower_handle.label;
    est.direction = exact ? Direction::LowerBound : Direction::Heuristic;
    return est;
  };
  RootResult lower = bowen_root(lower_handle);
  bracket.lower = lower.value;
  bracket.lower_provenance = lower_handle.label;
  RootTrace lt;
  lt.estimator = lower_handle.label;
  lt.level = 0;
  lt.root = lower.value;
  lt.flag = flag_name(lower.flag);
  bracket.trace.push_back(lt);
  if (!exact) bracket.flags.push_back("lower_heuristic");
  if (lower.flag != RootResult::Flag::Bracketed)
    bracket.flags.push_back(std::string("lower_") + flag_name(lower.flag));
  return bracket;
}

namespace {

// Sub-SFT membership for the cover DP: a word is alive when it avoids every
// forbidden factor and extends to an infinite clean sequence.
class SubSftFilter {
 public:
  SubSftFilter(const Sft& sft, const std::vector<Word>& forbidden) : sft_(sft) {
    for (const Word& f : forbidden) {
      if (f.empty()) fail(ErrorCode::BadInput, "empty forbidden word");
      flen_ = std::max(flen_, int(f.size()));
      forbidden_.insert(f);
    }
    if (forbidden_.empty()) {
      block_ = 1;
      alive_.assign(std::size_t(sft.k), 1);
      for (int i = 0; i < sft.k; ++i) states_.push_back(Word{i});
      return;
    }
    block_ = std::max(flen_, 1);
    states_ = enumerate_words(sft, block_, kStateBudget);
    alive_.assign(states_.size(), 0);
    for (std::size_t i = 0; i < states_.size(); ++i)
      alive_[i] = clean(states_[i]) ? 1 : 0;
    // prune states with no clean successor until stable
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < states_.size(); ++i) {
        if (!alive_[i]) continue;
        bool ok = false;
        Word next(states_[i].begin() + 1, states_[i].end());
        next.push_back(0);
        for (int a = 0; a < sft_.k && !ok; ++a) {
          next.back() = a;
          if (!sft_.transition(states_[i].back(), a)) continue;
          if (block_ > 1 && !new_window_clean(next)) continue;
          long r = rank(next);
          if (r >= 0 && alive_[std::size_t(r)]) ok = true;
        }
        if (!ok) {
          alive_[i] = 0;
          changed = true;
        }
      }
    }
    empty_ = std::none_of(alive_.begin(), alive_.end(), [](char c) { return c != 0; });
  }

  bool empty() const { return empty_; }

  // is w (admissible) clean and infinitely extendable?
  bool alive_word(const Word& w) const {
    if (!clean(w)) return false;
    if (int(w.size()) >= block_) {
      Word tail(w.end() - block_, w.end());
      long r = rank(tail);
      return r >= 0 && alive_[std::size_t(r)];
    }
    // short word: some extension to block length must be alive
    return extendable(w);
  }

 private:
  bool clean(const Word& w) const {
    for (std::size_t len = 1; len <= std::size_t(flen_); ++len)
      for (std::size_t i = 0; i + len <= w.size(); ++i)
        if (forbidden_.count(Word(w.begin() + long(i), w.begin() + long(i + len)))) return false;
    return true;
  }

  // only the factors ending at the last symbol are new
  bool new_window_clean(const Word& w) const {
    for (std::size_t len = 1; len <= std::min(w.size(), std::size_t(flen_)); ++len)
      if (forbidden_.count(Word(w.end() - long(len), w.end()))) return false;
    return true;
  }

  bool extendable(const Word& w) const {
    if (int(w.size()) >= block_) return alive_word_tail(w);
    for (int a = 0; a < sft_.k; ++a) {
      if (!sft_.transition(w.back(), a)) continue;
      Word next = w;
      next.push_back(a);
      if (!new_window_clean(next)) continue;
      if (extendable(next)) return true;
    }
    return false;
  }

  bool alive_word_tail(const Word& w) const {
    Word tail(w.end() - block_, w.end());
    long r = rank(tail);
    return r >= 0 && alive_[std::size_t(r)];
  }

  long rank(const Word& w) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), w);
    if (it == states_.end() || *it != w) return -1;
    return long(it - states_.begin());
  }

  Sft sft_;
  std::set<Word> forbidden_;
  int flen_ = 0;
  int block_ = 1;
  std::vector<Word> states_;
  std::vector<char> alive_;
  bool empty_ = false;
};

}  // namespace

double caratheodory_cover_measure(const CocycleSystem& system,
                                  const std::vector<Word>& forbidden, double alpha,
                                  int min_depth, int max_depth) {
  system.validate();
  if (max_depth > 20 || min_depth < 1 || min_depth > max_depth)
    fail(ErrorCode::DepthBudget, "cover depths must satisfy 1 <= min <= max <= 20");
  if (count_words(system.sft, max_depth).as_double() > 2e7)
    fail(ErrorCode::DepthBudget, "cover tree over budget");
  SubSftFilter filter(system.sft, forbidden);
  if (filter.empty()) fail(ErrorCode::EmptySubset, "forbidden words kill every sequence");

  PotentialSpec spec;
  spec.kind = PotentialKind::Bottom;
  spec.s = alpha;
  spec.sign = -1;  // weight(w) = exp(-phi^alpha(A_w))
  spec.validate(system.cocycle.d);

  // post-order DP: cover a node at its own depth or delegate to children
  struct Frame {
    Word word;
    ScaledMat prod;
    int next_child = 0;
    double child_sum = 0.0;
    bool any_child = false;
  };
  auto weight = [&](const ScaledMat& p) { return std::exp(potential_log(p, spec)); };

  double root_sum = 0.0;
  for (int first = 0; first < system.sft.k; ++first) {
    Word w{first};
    if (!filter.alive_word(w)) continue;
    std::vector<Frame> stack;
    ScaledMat prod{system.cocycle.mats[std::size_t(first)], 0.0};
    prod.renormalize();
    stack.push_back({w, prod, 0, 0.0, false});
    double subtree_value = 0.0;
    while (!stack.empty()) {
      Frame& top = stack.back();
      int depth = int(top.word.size());
      if (depth == max_depth || top.next_child >= system.sft.k) {
        double value;
        if (depth == max_depth) {
          value = weight(top.prod);
        } else {
          double own = weight(top.prod);
          value = top.any_child ? std::min(own, top.child_sum) : own;
          if (depth < min_depth && top.any_child) value = top.child_sum;
          // a node below min_depth with no alive children cannot happen:
          // alive words always extend
        }
        stack.pop_back();
        if (stack.empty()) {
          subtree_value = value;
        } else {
          stack.back().child_sum += value;
          stack.back().any_child = true;
        }
        continue;
      }
      int c = top.next_child++;
      if (!system.sft.transition(top.word.back(), c)) continue;
      Word next = top.word;
      next.push_back(c);
      if (!filter.alive_word(next)) continue;
      ScaledMat np;
      np.m = system.cocycle.mats[std::size_t(c)] * top.prod.m;
      np.log_scale = top.prod.log_scale;
      np.renormalize();
      stack.push_back({std::move(next), np, 0, 0.0, false});
    }
    root_sum += subtree_value;
  }
  return root_sum;
}

BoxCountResult box_counting_oracle(const Realizer& realizer, const std::vector<int>& depths) {
  if (depths.size() < 3) fail(ErrorCode::BadInput, "need at least 3 grid depths");
  BoxCountResult out;
  for (int g : depths) {
    double delta = std::ldexp(1.0, -g);
    int m = 1;
    while (realizer.max_diameter(m) >= 0.5 * delta) {
      ++m;
      if (m > 64) fail(ErrorCode::BudgetExceeded, "symbolic depth runaway");
    }
    if (realizer.piece_count(m) > 2e7)
      fail(ErrorCode::BudgetExceeded, "box oracle piece budget exceeded");
    std::unordered_set<std::uint64_t> boxes;
    const double snap = 1e-9;
    realizer.pieces(m, [&](const GeometryPiece& piece) {
      long idx_lo[3] = {0, 0, 0}, idx_hi[3] = {0, 0, 0};
      for (int a = 0; a < realizer.dim; ++a) {
        double lo = piece.lo[std::size_t(a)] / delta;
        double hi = piece.hi[std::size_t(a)] / delta;
        idx_lo[a] = long(std::floor(lo + snap));
        idx_hi[a] = long(std::ceil(hi - snap)) - 1;
        if (idx_hi[a] < idx_lo[a]) idx_hi[a] = idx_lo[a];
      }
      for (long i = idx_lo[0]; i <= idx_hi[0]; ++i)
        for (long j = idx_lo[1]; j <= idx_hi[1]; ++j)
          for (long l = idx_lo[2]; l <= idx_hi[2]; ++l) {
            std::uint64_t key = (std::uint64_t(i) & 0x1fffff) |
                                ((std::uint64_t(j) & 0x1fffff) << 21) |
                                ((std::uint64_t(l) & 0x1fffff) << 42);
            boxes.insert(key);
          }
    });
    out.depths.push_back(g);
    out.log_counts.push_back(std::log(double(boxes.size())));
  }
  // least squares of log N against -log delta = depth * log 2
  double n = double(out.depths.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < out.depths.size(); ++i) {
    double x = double(out.depths[i]) * std::log(2.0);
    double y = out.log_counts[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - out.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < out.depths.size(); ++i) {
    double x = double(out.depths[i]) * std::log(2.0);
    double r = out.log_counts[i] - (out.slope * x + intercept);
    rss += r * r;
  }
  out.residual = std::sqrt(rss / n);
  return out;
}

double moran_root(const std::vector<double>& ratios) {
  if (ratios.empty()) fail(ErrorCode::BadInput, "moran_root needs at least one ratio");
  std::vector<double> r;
  for (double v : ratios) {
    if (!(v > 0.0)) fail(ErrorCode::BadInput, "ratios must be positive");
    r.push_back(v > 1.0 ? 1.0 / v : v);
  }
  double rmax = *std::max_element(r.begin(), r.end());
  if (rmax >= 1.0) fail(ErrorCode::BadInput, "ratios must be contractions");
  auto f = [&](double s) {
    double sum = 0.0;
    for (double v : r) sum += std::pow(v, s);
    return sum;
  };
  if (r.size() == 1) return 0.0;  // r^s = 1 only at s = 0
  double lo = 0.0;
  double hi = std::log(double(r.size())) / (-std::log(rmax)) + 1.0;
  for (int iter = 0; iter < 200 && (hi - lo) >= 1e-12; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace svp
