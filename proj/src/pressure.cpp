#include "svp/pressure.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "svp/errors.hpp"
#include "svp/util.hpp"

namespace svp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void CocycleSystem::validate() const {
  cocycle.validate();
  if (int(cocycle.mats.size()) != sft.k)
    fail(ErrorCode::BadInput, "cocycle needs one matrix per symbol");
}

const char* direction_name(Direction d) {
  switch (d) {
    case Direction::UpperBound: return "upper";
    case Direction::LowerBound: return "lower";
    case Direction::Heuristic: return "heuristic";
  }
  return "?";
}

namespace {

PotentialSpec with_blocks(const CocycleSystem& system, PotentialKind kind, int sign, double s) {
  PotentialSpec spec;
  spec.kind = kind;
  spec.sign = sign;
  spec.s = s;
  if (kind == PotentialKind::TildeTop || kind == PotentialKind::TildeBottom) {
    if (!system.cocycle.blocks)
      fail(ErrorCode::BlockMismatch, "tilde potentials need cocycle block metadata");
    spec.blocks = system.cocycle.blocks;
  }
  return spec;
}

Direction certify_cylinder(const CocycleSystem& system, const PotentialSpec& spec) {
  int d = system.cocycle.d;
  if (is_subadditive(spec, d)) return Direction::UpperBound;
  if (is_superadditive(spec, d) && system.sft.full_shift()) return Direction::LowerBound;
  return Direction::Heuristic;
}

// DFS over one first-symbol subtree; calls leaf with each length-n product,
// in lexicographic word order.
void dfs_subtree(const CocycleSystem& system, int first, int n,
                 const std::function<void(const ScaledMat&)>& leaf) {
  const Sft& sft = system.sft;
  std::vector<ScaledMat> stack;
  std::vector<int> child;
  stack.push_back({system.cocycle.mats[std::size_t(first)], 0.0});
  stack.back().renormalize();
  if (n == 1) {
    leaf(stack.back());
    return;
  }
  child.push_back(0);
  std::vector<int> symbols{first};
  while (!stack.empty()) {
    int depth = int(stack.size());
    if (child[std::size_t(depth - 1)] >= sft.k) {
      stack.pop_back();
      child.pop_back();
      symbols.pop_back();
      continue;
    }
    int c = child[std::size_t(depth - 1)]++;
    if (!sft.transition(symbols.back(), c)) continue;
    ScaledMat next;
    next.m = system.cocycle.mats[std::size_t(c)] * stack.back().m;
    next.log_scale = stack.back().log_scale;
    next.renormalize();
    if (depth + 1 == n) {
      leaf(next);
    } else {
      stack.push_back(next);
      child.push_back(0);
      symbols.push_back(c);
    }
  }
}

}  // namespace

std::vector<double> word_potential_values(const CocycleSystem& system,
                                          const PotentialSpec& spec, const BlockSft& bs,
                                          double divisor, unsigned threads) {
  std::vector<double> values(bs.states.size());
  const int n = bs.n;
  // first-symbol partitions are contiguous runs of the lex-ordered states
  std::vector<std::size_t> offset(std::size_t(system.sft.k) + 1, bs.states.size());
  for (int a = 0; a < system.sft.k; ++a) {
    Word key{a};
    auto it = std::lower_bound(bs.states.begin(), bs.states.end(), key);
    offset[std::size_t(a)] = std::size_t(it - bs.states.begin());
  }
  parallel_for_static(std::size_t(system.sft.k), threads, [&](std::size_t a) {
    std::size_t idx = offset[a];
    dfs_subtree(system, int(a), n, [&](const ScaledMat& prod) {
      values[idx++] = potential_log(prod, spec) / divisor;
    });
  });
  return values;
}

PressureEstimate cylinder_sum(const CocycleSystem& system, const PotentialSpec& spec, int n,
                              unsigned threads) {
  system.validate();
  spec.validate(system.cocycle.d);
  if (n < 1) fail(ErrorCode::BadInput, "level must be >= 1");
  if (count_words(system.sft, n).as_double() > double(kWordBudget))
    fail(ErrorCode::BudgetExceeded, "cylinder sum over the word budget");

  std::vector<LogSumExp> parts(std::size_t(system.sft.k));
  parallel_for_static(std::size_t(system.sft.k), threads, [&](std::size_t a) {
    dfs_subtree(system, int(a), n,
                [&](const ScaledMat& prod) { parts[a].add(potential_log(prod, spec)); });
  });
  LogSumExp total = merge_pairwise(std::move(parts));

  PressureEstimate est;
  est.value = total.value() / double(n);
  est.level = n;
  est.estimator = "cylinder_sum";
  est.direction = certify_cylinder(system, spec);
  return est;
}

PressureEstimate block_pressure(const CocycleSystem& system, const PotentialSpec& spec, int n,
                                unsigned threads) {
  system.validate();
  spec.validate(system.cocycle.d);
  if (n < 1) fail(ErrorCode::BadInput, "level must be >= 1");
  BlockSft bs = recode_sliding(system.sft, n);
  std::vector<double> values = word_potential_values(system, spec, bs, double(n), threads);
  PressureEstimate est;
  est.value = weighted_pressure(bs, values);
  est.level = n;
  est.estimator = "block_pressure";
  int d = system.cocycle.d;
  est.direction = is_subadditive(spec, d) ? Direction::UpperBound : Direction::LowerBound;
  return est;
}

PressureEstimate super_power_lower(const CocycleSystem& system, const PotentialSpec& spec,
                                   int k, unsigned threads) {
  system.validate();
  spec.validate(system.cocycle.d);
  if (k < 0) fail(ErrorCode::BadInput, "power exponent must be >= 0");
  if (!is_superadditive(spec, system.cocycle.d))
    fail(ErrorCode::SpecNotSuperAdditive,
         "super_power_lower needs a super-additive potential sequence");
  int n = 1 << k;
  BlockSft bs = recode_power(system.sft, n);
  std::vector<double> values = word_potential_values(system, spec, bs, 1.0, threads);
  PressureEstimate est;
  est.value = weighted_pressure(bs, values) / double(n);
  est.level = k;
  est.estimator = "super_power_lower";
  est.direction = Direction::LowerBound;
  return est;
}

bool LyapunovSpectrum::all_positive() const {
  for (double l : lambdas)
    if (!(l > 0.0)) return false;
  return true;
}

namespace {

bool cocycle_diagonal(const MatrixCocycle& c) {
  for (const Mat& m : c.mats) {
    double scale = std::max(1.0, m.max_abs());
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j)
        if (i != j && std::fabs(m.at(i, j)) > 1e-14 * scale) return false;
  }
  return true;
}

// Modified Gram-Schmidt QR with positive diagonal; returns diag(R) logs added
// into acc and overwrites q with the orthonormal factor.
void qr_accumulate(const Mat& a, Mat& q, std::vector<double>& acc) {
  int d = a.dim();
  Mat b = a * q;
  Mat qn(d);
  for (int col = 0; col < d; ++col) {
    std::array<double, kMaxDim> v{};
    for (int i = 0; i < d; ++i) v[std::size_t(i)] = b.at(i, col);
    for (int prev = 0; prev < col; ++prev) {
      double dot = 0.0;
      for (int i = 0; i < d; ++i) dot += qn.at(i, prev) * v[std::size_t(i)];
      for (int i = 0; i < d; ++i) v[std::size_t(i)] -= dot * qn.at(i, prev);
    }
    double nrm = 0.0;
    for (int i = 0; i < d; ++i) nrm += v[std::size_t(i)] * v[std::size_t(i)];
    nrm = std::sqrt(nrm);
    acc[std::size_t(col)] += std::log(nrm);
    for (int i = 0; i < d; ++i) qn.at(i, col) = v[std::size_t(i)] / nrm;
  }
  q = qn;
}

int sample_index(SplitMix64& rng, const double* probs, int k) {
  double u = rng.uniform();
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return k - 1;
}

}  // namespace

LyapunovSpectrum lyapunov_spectrum(const CocycleSystem& system, const MarkovMeasure& mu,
                                   int trials, int horizon, std::uint64_t seed) {
  system.validate();
  if (mu.k != system.sft.k)
    fail(ErrorCode::IncompatibleMeasure, "measure alphabet mismatch");
  validate_markov(mu, &system.sft);
  int d = system.cocycle.d;
  LyapunovSpectrum spec;

  if (cocycle_diagonal(system.cocycle)) {
    spec.exact = true;
    spec.lambdas.assign(std::size_t(d), 0.0);
    spec.stderrs.assign(std::size_t(d), 0.0);
    for (int j = 0; j < d; ++j) {
      double l = 0.0;
      for (int i = 0; i < system.sft.k; ++i)
        l += mu.pi[std::size_t(i)] *
             std::log(std::fabs(system.cocycle.mats[std::size_t(i)].at(j, j)));
      spec.lambdas[std::size_t(j)] = l;
    }
    std::sort(spec.lambdas.rbegin(), spec.lambdas.rend());
    return spec;
  }

  if (trials < 2 || horizon < 1) fail(ErrorCode::BadInput, "need trials >= 2, horizon >= 1");
  std::vector<std::vector<double>> per_trial{std::size_t(trials), std::vector<double>{}};
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_stream(seed, std::uint64_t(t)));
    int state = sample_index(rng, mu.pi.data(), mu.k);
    Mat q = Mat::identity(d);
    std::vector<double> acc(std::size_t(d), 0.0);
    for (int step = 0; step < horizon; ++step) {
      qr_accumulate(system.cocycle.mats[std::size_t(state)], q, acc);
      state = sample_index(rng, mu.p.data() + std::size_t(state) * std::size_t(mu.k), mu.k);
    }
    for (double& v : acc) v /= double(horizon);
    per_trial[std::size_t(t)] = std::move(acc);
  }
  spec.exact = false;
  spec.lambdas.assign(std::size_t(d), 0.0);
  spec.stderrs.assign(std::size_t(d), 0.0);
  for (int j = 0; j < d; ++j) {
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) mean += per_trial[std::size_t(t)][std::size_t(j)];
    mean /= double(trials);
    double var = 0.0;
    for (int t = 0; t < trials; ++t) {
      double dev = per_trial[std::size_t(t)][std::size_t(j)] - mean;
      var += dev * dev;
    }
    var /= double(trials - 1);
    spec.lambdas[std::size_t(j)] = mean;
    spec.stderrs[std::size_t(j)] = std::sqrt(var / double(trials));
  }
  // QR already orders exponents; sort to enforce the invariant regardless
  std::vector<std::size_t> idx(std::size_t(d), 0);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return spec.lambdas[a] > spec.lambdas[b];
  });
  LyapunovSpectrum sorted;
  sorted.exact = false;
  for (std::size_t i : idx) {
    sorted.lambdas.push_back(spec.lambdas[i]);
    sorted.stderrs.push_back(spec.stderrs[i]);
  }
  return sorted;
}

double free_energy(const CocycleSystem& system, const MarkovMeasure& mu,
                   const PotentialSpec& spec, const LyapunovSpectrum& lyap) {
  spec.validate(system.cocycle.d);
  double h = markov_entropy(mu);
  double partial = 0.0;
  switch (spec.kind) {
    case PotentialKind::Top:
      partial = partial_sum_top(lyap.lambdas, spec.s);
      break;
    case PotentialKind::Bottom:
      partial = partial_sum_bottom(lyap.lambdas, spec.s);
      break;
    case PotentialKind::Scalar: {
      double sum = std::accumulate(lyap.lambdas.begin(), lyap.lambdas.end(), 0.0);
      partial = spec.s * sum / double(system.cocycle.d);
      break;
    }
    case PotentialKind::TildeTop:
    case PotentialKind::TildeBottom:
      fail(ErrorCode::BadInput,
           "free energy of tilde potentials needs per-block exponents; use Top/Bottom");
  }
  return h + double(spec.sign) * partial;
}

Schedule Schedule::from_levels(const std::vector<int>& levels) {
  Schedule s;
  s.block_levels = levels;
  s.cylinder_levels = levels;
  int max_level = 1;
  for (int l : levels) max_level = std::max(max_level, l);
  s.power_levels.clear();
  for (int k = 0; (1 << k) <= max_level; ++k) s.power_levels.push_back(k);
  return s;
}

namespace {

double now_ms() {
  using namespace std::chrono;
  return double(duration_cast<microseconds>(steady_clock::now().time_since_epoch()).count()) /
         1000.0;
}

void consider(ProfilePoint& point, const PressureEstimate& est, bool additive) {
  bool upper = est.direction == Direction::UpperBound;
  bool lower = est.direction == Direction::LowerBound;
  if (additive && est.direction != Direction::Heuristic) upper = lower = true;
  if (upper && (!point.best_upper || est.value < point.best_upper->value))
    point.best_upper = est;
  if (lower && (!point.best_lower || est.value > point.best_lower->value))
    point.best_lower = est;
}

}  // namespace

PressureProfile pressure_profile(const CocycleSystem& system, PotentialKind kind, int sign,
                                 const std::vector<double>& s_grid, const Schedule& schedule,
                                 unsigned threads) {
  system.validate();
  PressureProfile profile;
  int d = system.cocycle.d;
  for (double s : s_grid) {
    PotentialSpec spec = with_blocks(system, kind, sign, s);
    spec.validate(d);
    bool additive = is_subadditive(spec, d) && is_superadditive(spec, d);
    ProfilePoint point;
    point.s = s;
    auto record = [&](const PressureEstimate& est) {
      TraceEntry e;
      e.estimator = est.estimator;
      e.spec = spec.describe();
      e.s = s;
      e.level = est.level;
      e.value = est.value;
      e.direction = est.direction;
      profile.trace.push_back(e);
      consider(point, est, additive);
    };
    for (int n : schedule.block_levels) {
      double t0 = now_ms();
      PressureEstimate est = block_pressure(system, spec, n, threads);
      double t1 = now_ms();
      record(est);
      profile.trace.back().wall_ms = t1 - t0;
    }
    for (int n : schedule.cylinder_levels) {
      double t0 = now_ms();
      PressureEstimate est = cylinder_sum(system, spec, n, threads);
      double t1 = now_ms();
      record(est);
      profile.trace.back().wall_ms = t1 - t0;
    }
    if (is_superadditive(spec, d)) {
      for (int k : schedule.power_levels) {
        double t0 = now_ms();
        PressureEstimate est = super_power_lower(system, spec, k, threads);
        double t1 = now_ms();
        record(est);
        profile.trace.back().wall_ms = t1 - t0;
      }
    }
    profile.points.push_back(point);
  }
  return profile;
}

}  // namespace svp
