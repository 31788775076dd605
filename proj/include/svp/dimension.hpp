#ifndef SVP_DIMENSION_HPP
#define SVP_DIMENSION_HPP

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "svp/pressure.hpp"

namespace svp {

enum class BracketTarget { HausdorffRepeller, BoxRepeller, AffinityIfs, Caratheodory };

const char* bracket_target_name(BracketTarget t);

// s -> pressure estimate at a fixed certification direction and estimator
// level. The callable must be strictly decreasing on [0, dmax]; bowen_root
// spot-checks that on the points it evaluates.
struct PressureFunctionHandle {
  std::function<PressureEstimate(double)> eval;
  double dmax = 1.0;
  std::string label;
};

struct RootResult {
  enum class Flag { Bracketed, SaturatedLow, SaturatedHigh };
  double value = 0.0;
  Flag flag = Flag::Bracketed;
  bool monotone = true;  // the evaluated points decreased in s
};

// Bisection for handle(s) = 0. handle(0) <= 0 saturates at 0, handle(dmax)
// >= 0 saturates at dmax; otherwise bisect to |interval| < tol (max 200
// steps) and return the midpoint.
RootResult bowen_root(const PressureFunctionHandle& handle, double tol = 1e-10);

struct RootTrace {
  std::string estimator;
  int level = 0;
  double root = 0.0;
  std::string flag;
};

struct DimensionBracket {
  BracketTarget target = BracketTarget::HausdorffRepeller;
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_provenance;
  std::string upper_provenance;
  std::vector<std::string> flags;
  std::vector<RootTrace> trace;
};

// Certified dimension bracket for an expanding SFT-coded repeller.
// Upper endpoint: smallest root over the schedule of the certified upper
// estimates of the sub-additive pressure (bottom potential, sign -1).
// Lower endpoint: largest root over the doubling schedule of the certified
// lower estimates of the super-additive pressure (top potential, sign -1);
// the one-step root (k = 0) is always in the trace.
DimensionBracket repeller_bracket(const CocycleSystem& system, const Schedule& schedule,
                                  unsigned threads = 1);

// Bracket for the affinity dimension of a strictly contracting IFS cocycle.
// Upper endpoint from certified upper estimates of P(A,s) (top potential,
// sign +1). The lower endpoint is certified via exact-Lyapunov free energy
// for diagonal cocycles; otherwise it is heuristic and flagged.
DimensionBracket affinity_dimension(const CocycleSystem& system, const Schedule& schedule,
                                    unsigned threads = 1);

// Bowen root of the sub-additive pressure estimate; equals the generating
// root of repeller_bracket's upper endpoint by construction.
DimensionBracket caratheodory_dimension(const CocycleSystem& system, const Schedule& schedule,
                                        unsigned threads = 1);

// Finite-depth estimate of the Caratheodory cover quantity m(Z, alpha):
// minimum over covers of the sub-SFT Z (sequences avoiding the forbidden
// factors) by cylinders of depth in [min_depth, max_depth], each cylinder w
// weighted exp(-phi^alpha(A_w)). The DP covers each node either at its own
// depth or through its children.
double caratheodory_cover_measure(const CocycleSystem& system,
                                  const std::vector<Word>& forbidden, double alpha,
                                  int min_depth, int max_depth);

// Axis-aligned geometry batch interface between models and the box oracle.
struct GeometryPiece {
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{0.0, 0.0, 0.0};
};

struct Realizer {
  int dim = 1;
  // max piece diameter at symbolic depth m
  std::function<double(int)> max_diameter;
  // stream the depth-m pieces in a deterministic order
  std::function<void(int, const std::function<void(const GeometryPiece&)>&)> pieces;
  // number of pieces at depth m (budget checks)
  std::function<double(int)> piece_count;
};

struct BoxCountResult {
  double slope = 0.0;
  double residual = 0.0;  // RMS of the least-squares fit
  std::vector<int> depths;
  std::vector<double> log_counts;  // log N(2^-depth)
};

// Counts half-open dyadic grid boxes meeting the depth-n approximation of
// the set; the symbolic depth is chosen so piece diameters are < delta/2.
// Returns the least-squares slope of log N against -log delta.
BoxCountResult box_counting_oracle(const Realizer& realizer, const std::vector<int>& depths);

// Bisection on sum r_i^s = 1 to 1e-12; ratios above 1 are treated as
// reciprocals (slopes).
double moran_root(const std::vector<double>& ratios);

}  // namespace svp

#endif
