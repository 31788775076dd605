#ifndef SVP_MODELS_HPP
#define SVP_MODELS_HPP

#include <optional>
#include <vector>

#include "svp/dimension.hpp"
#include "svp/pressure.hpp"

namespace svp {

// Piecewise-linear expanding Markov map of the line: branch i maps its
// domain interval affinely onto a union of branch domains.
struct PiecewiseLinearMap1D {
  struct Branch {
    double slope = 2.0;  // |slope| > 1
    double lo = 0.0, hi = 1.0;  // domain interval
  };
  std::vector<Branch> branches;
  // optional extra restriction on the geometric incidence matrix
  std::optional<std::vector<std::vector<int>>> transitions;
};

// Integer toral endomorphism diag(factors) restricted to a digit set:
// branch (d_1..d_m) is the inverse x -> ((x_a + d_a) / factor_a)_a.
struct DiagonalToralSystem {
  std::vector<int> factors;               // expansion factor per coordinate
  std::vector<std::vector<int>> digits;   // one digit tuple per branch
  std::optional<std::vector<std::vector<int>>> transitions;
};

// Self-affine iterated function system x -> A_i x + t_i, contractions.
struct SelfAffineIfs {
  int d = 2;
  std::vector<Mat> maps;
  std::vector<std::vector<double>> translations;
  std::optional<std::vector<std::vector<int>>> transitions;
};

struct ModelSystem {
  CocycleSystem system;
  Realizer realizer;
};

ModelSystem build_1d(const PiecewiseLinearMap1D& map);
ModelSystem build_toral(const DiagonalToralSystem& spec);
ModelSystem build_ifs(const SelfAffineIfs& spec);

// One perturbation direction per symbol over an epsilon grid.
struct PerturbationFamily {
  CocycleSystem base;
  std::vector<Mat> directions;
  std::vector<double> eps_grid;
};

// Generators A_i + eps * D_i; invertibility and the orientation invariant
// (expansion/contraction) must survive, else InvariantBroken.
CocycleSystem perturb(const PerturbationFamily& family, double eps);

}  // namespace svp

#endif
