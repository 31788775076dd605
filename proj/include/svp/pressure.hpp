#ifndef SVP_PRESSURE_HPP
#define SVP_PRESSURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "svp/potentials.hpp"
#include "svp/sft.hpp"
#include "svp/transfer.hpp"

namespace svp {

// An SFT-coded matrix cocycle, the object all estimators act on.
struct CocycleSystem {
  Sft sft;
  MatrixCocycle cocycle;
  std::string name;

  void validate() const;
};

enum class Direction { UpperBound, LowerBound, Heuristic };

const char* direction_name(Direction d);

struct PressureEstimate {
  double value = 0.0;
  Direction direction = Direction::Heuristic;
  int level = 0;
  std::string estimator;
};

inline constexpr std::uint64_t kWordBudget = 100000000;  // cylinder-tree node visits

// (1/n) log sum over admissible n-words of exp(potential_log(A_w, spec)).
// Certified upper bound for sub-additive specs on any SFT (Fekete); certified
// lower bound for super-additive specs on full shifts; heuristic otherwise.
// Deterministic under threading: the word tree is partitioned by first symbol
// and partial log-sum-exps merge in a fixed pairwise tree.
PressureEstimate cylinder_sum(const CocycleSystem& system, const PotentialSpec& spec,
                              int n, unsigned threads = 1);

// Exact additive pressure of the depth-n potential w -> (1/n) potential_log(A_w).
// Upper bound for sub-additive specs (the pressure sequence decreases to the
// limit), lower bound for super-additive specs, exact for additive ones.
PressureEstimate block_pressure(const CocycleSystem& system, const PotentialSpec& spec,
                                int n, unsigned threads = 1);

// (1/2^k) times the additive pressure of B -> potential_log(B, spec) on the
// 2^k-th power recoding. Lower bound of the super-additive pressure,
// non-decreasing in k along the doubling schedule.
PressureEstimate super_power_lower(const CocycleSystem& system, const PotentialSpec& spec,
                                   int k, unsigned threads = 1);

struct LyapunovSpectrum {
  std::vector<double> lambdas;  // sorted non-increasing, nats per iterate
  std::vector<double> stderrs;  // zero on the exact (diagonal) path
  bool exact = false;

  bool all_positive() const;
};

// Lyapunov exponents of the cocycle w.r.t. a compatible Markov measure.
// Diagonal cocycles take the exact path lambda_j = sum_i pi_i log|d_j(i)|;
// the general path is a seeded QR Monte Carlo over sampled orbits.
LyapunovSpectrum lyapunov_spectrum(const CocycleSystem& system, const MarkovMeasure& mu,
                                   int trials = 1000, int horizon = 10000,
                                   std::uint64_t seed = 1);

// h_mu + sign * (partial Lyapunov sum for the spec). By the variational
// principle this lower-bounds the matching pressure; certified only when the
// spectrum is exact.
double free_energy(const CocycleSystem& system, const MarkovMeasure& mu,
                   const PotentialSpec& spec, const LyapunovSpectrum& lyap);

struct Schedule {
  std::vector<int> block_levels{1, 2, 3, 4};
  std::vector<int> power_levels{0, 1, 2};  // exponents k, levels 2^k
  std::vector<int> cylinder_levels{};

  static Schedule from_levels(const std::vector<int>& levels);
};

struct TraceEntry {
  std::string estimator;
  std::string spec;
  double s = 0.0;
  int level = 0;
  double value = 0.0;
  Direction direction = Direction::Heuristic;
  double wall_ms = 0.0;
};

struct ProfilePoint {
  double s = 0.0;
  std::optional<PressureEstimate> best_upper;  // smallest certified upper
  std::optional<PressureEstimate> best_lower;  // largest certified lower
};

struct PressureProfile {
  std::vector<ProfilePoint> points;
  std::vector<TraceEntry> trace;
};

// Runs the applicable estimators over the schedule for spec(s) at each grid
// point. Additive specs are exact, so each estimate feeds both sides.
PressureProfile pressure_profile(const CocycleSystem& system, PotentialKind kind, int sign,
                                 const std::vector<double>& s_grid, const Schedule& schedule,
                                 unsigned threads = 1);

// Depth-n potential table over the block states (lexicographic order):
// values[i] = potential_log(A_{states[i]}, spec) / divisor.
std::vector<double> word_potential_values(const CocycleSystem& system,
                                          const PotentialSpec& spec, const BlockSft& bs,
                                          double divisor, unsigned threads = 1);

}  // namespace svp

#endif
