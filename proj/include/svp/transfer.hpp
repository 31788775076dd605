#ifndef SVP_TRANSFER_HPP
#define SVP_TRANSFER_HPP

#include <map>
#include <memory>
#include <vector>

#include "svp/sft.hpp"

namespace svp {

// Abstract weighted transfer operator M[w][w'] = exp(pot(w)) * flag(w->w').
// Concrete forms: dense over symbols, implicit sliding-block, implicit
// power-block. Everything downstream (spectral radius, eigenvectors) only
// needs matvec and its transpose.
class LinOp {
 public:
  virtual ~LinOp() = default;
  virtual std::size_t size() const = 0;
  virtual void apply(const std::vector<double>& x, std::vector<double>& y) const = 0;
  virtual void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const = 0;
};

std::unique_ptr<LinOp> make_dense_op(const Sft& sft, const std::vector<double>& weights);
std::unique_ptr<LinOp> make_block_op(const BlockSft& bs, const std::vector<double>& weights);

// log of the Perron root of a nonnegative operator. Power iteration on
// (M + I) from the all-ones vector; successive Rayleigh quotients within
// 1e-13 stop the iteration, capped at 1e5 steps. Deterministic.
double log_perron_root(const LinOp& op);

// Perron eigenvector (right if transpose=false), normalized to unit sum.
// Requires a primitive operator to converge; callers guard irreducibility.
std::vector<double> perron_vector(const LinOp& op, bool transpose);

// Depth-m locally constant potential: one value per admissible m-word,
// stored in lexicographic word order (the enumerate_words order).
struct LocallyConstantPotential {
  int depth = 1;
  std::vector<double> values;

  static LocallyConstantPotential constant(const Sft& sft, double value);
  static LocallyConstantPotential from_table(const Sft& sft,
                                             const std::map<Word, double>& table);
};

// Exact topological pressure of a locally constant potential: log Perron
// root of the weighted transfer matrix on the depth-recoded system. Exact
// for locally constant potentials; reducible systems give the max over
// strongly connected components (the spectral radius).
double additive_pressure(const Sft& sft, const LocallyConstantPotential& pot);

// log Perron root of the operator weighted by exp(logw), with the largest
// log-weight factored out first.
double weighted_pressure(const Sft& sft, const std::vector<double>& logw);
double weighted_pressure(const BlockSft& bs, const std::vector<double>& logw);

// log of the Perron root of T itself, in nats.
double topological_entropy(const Sft& sft);
double topological_entropy(const BlockSft& bs);

// Stationary Markov chain on {0..k-1}; P supported on allowed transitions.
struct MarkovMeasure {
  int k = 0;
  std::vector<double> p;   // row-major k*k, row-stochastic
  std::vector<double> pi;  // stationary distribution

  double prob(int i, int j) const { return p[std::size_t(i) * std::size_t(k) + std::size_t(j)]; }
};

// Checks row sums, stationarity and support; tolerance 1e-12.
void validate_markov(const MarkovMeasure& mm, const Sft* support = nullptr);

// Stationary vector of a row-stochastic matrix (power iteration on P^T).
std::vector<double> stationary_distribution(int k, const std::vector<double>& p);

double markov_entropy(const MarkovMeasure& mm);

// Ruelle-Perron-Frobenius data for a locally constant potential over an
// irreducible SFT. The measure lives on the depth-recoded block states.
struct GibbsResult {
  double pressure = 0.0;
  MarkovMeasure measure;       // over blocks.states
  double gibbs_constant = 1.0; // two-sided cylinder comparison constant
  BlockSft blocks;
  std::vector<double> right;   // h,  M h = rho h
  std::vector<double> left;    // nu, nu M = rho nu, normalized <nu,h> = 1
  std::vector<double> state_pot;
};

GibbsResult rpf_gibbs(const Sft& sft, const LocallyConstantPotential& pot);

// Measure of the cylinder [u], |u| >= depth; 0 for inadmissible words.
double cylinder_mass(const GibbsResult& g, const Word& u);

// Birkhoff sum of the potential over the complete depth-m windows of u,
// i.e. sum_{j=0}^{|u|-m} pot(u_j..u_{j+m-1}). This is the quantity the
// Gibbs constant certifies: C^-1 <= mu[u]/exp(-nP + S(u)) <= C.
double window_sum(const GibbsResult& g, const Word& u);

}  // namespace svp

#endif
