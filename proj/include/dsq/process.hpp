#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "dsq/entropy.hpp"
#include "dsq/simplex.hpp"

namespace dsq {

// Where the per-step matrices come from: one fixed matrix for every step,
// or a fresh sample per step from one of the doubly stochastic samplers.
class ChainSource {
 public:
  enum class Mode { Fixed, Sampled };

  static ChainSource fixed(StochasticMatrix m);
  static ChainSource sampled(DsSampler method);

  Mode mode() const { return mode_; }
  const StochasticMatrix& fixed_matrix() const;
  DsSampler method() const { return method_; }

  // Matrix for step k (0-based). Sampled mode derives the step's sub-seed
  // from chain_seed, so steps can be materialized in any order.
  StochasticMatrix matrix_at(Eigen::Index step, Eigen::Index n, std::uint64_t chain_seed) const;

 private:
  ChainSource() = default;

  Mode mode_ = Mode::Sampled;
  DsSampler method_ = DsSampler::PermutationMixture;
  std::vector<StochasticMatrix> fixed_;  // empty or one element
};

struct ProcessConfig {
  Eigen::Index n = 0;
  ChainSource chain = ChainSource::sampled(DsSampler::PermutationMixture);
  double rate = 1.0;
  double horizon = 1.0;
  std::variant<Eigen::Index, ProbabilityVector> initial_state{Eigen::Index{0}};
  std::uint64_t seed = 0;
  std::vector<Alpha> alphas = default_alphas();
};

// One seeded realization. Row k of the tables describes reduction k+1: the
// pre-reduction distribution p = M(k) e_s, its entropies and l1 distance to
// uniform, the running product of the chain's Dobrushin coefficients, and
// the basis state sampled from p. Equality is exact, bit for bit; that is
// the reproducibility contract.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<Eigen::Index> states;
  Eigen::MatrixXd entropies;  // |times| x |alphas|
  std::vector<double> distances;
  std::vector<double> dobrushin_bounds;
  std::vector<Alpha> alphas;
  Eigen::Index dimension = 0;
  Eigen::Index initial_state = 0;

  bool operator==(const TrajectoryRecord& other) const;
};

// Deterministic (non-selective) distribution evolution p <- M(k) p next to
// the empirical trajectory statistics. Row k of the tables describes the
// distribution after k steps; row 0 is the initial distribution and
// dobrushin_bounds[0] = 1.
struct EnsembleReport {
  std::vector<double> times;
  Eigen::MatrixXd entropies;  // (|times|+1) x |alphas|
  std::vector<double> distances;
  std::vector<double> dobrushin_bounds;
  std::vector<Alpha> alphas;
  Eigen::VectorXd final_distribution;
  Eigen::VectorXd empirical_final;  // frequency of each final state over trajectories
  Eigen::Index trajectory_count = 0;
  std::vector<TrajectoryRecord> records;
};

// Poisson event times in (0, horizon] by exponential inter-arrivals;
// rate = 0 yields no events. Deterministic per seed and independent of any
// other stream drawn from the same seed.
std::vector<double> sample_reduction_times(double rate, double horizon, std::uint64_t seed);

// Runs the trajectory with index 0 of the ensemble below.
TrajectoryRecord run_trajectory(const ProcessConfig& cfg);

// All trajectories share the event times and the chain; each draws its
// reductions from its own sub-seeded stream, so any thread count (and any
// scheduling) produces identical records.
EnsembleReport run_ensemble(const ProcessConfig& cfg, Eigen::Index trajectories,
                            int threads = 1);

// Probability of the history (j_0, ..., j_L) given its initial index:
// prod_k chain[k](j_{k+1}, j_k). Summing over all continuations of a fixed
// j_0 gives 1 for any column-stochastic chain.
double history_probability(const std::vector<StochasticMatrix>& chain,
                           const std::vector<Eigen::Index>& history);

// Dobrushin coefficient of the full chain product next to the product of
// the per-factor coefficients; the former never exceeds the latter.
struct ChainContraction {
  double product_coefficient = 0.0;
  double coefficient_product = 0.0;
};

ChainContraction chain_contraction(const std::vector<StochasticMatrix>& chain);

}  // namespace dsq
