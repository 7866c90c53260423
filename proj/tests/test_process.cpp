#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "dsq/error.hpp"
#include "dsq/process.hpp"

using namespace dsq;

namespace {

ProcessConfig flat_config() {
  ProcessConfig cfg;
  cfg.n = 2;
  cfg.chain = ChainSource::fixed(validate(Eigen::MatrixXd::Constant(2, 2, 0.5)));
  cfg.rate = 4.0;
  cfg.horizon = 2.0;
  cfg.initial_state = Eigen::Index{0};
  cfg.seed = 11;
  return cfg;
}

Eigen::MatrixXd sym2_helper() {
  Eigen::MatrixXd m(2, 2);
  m << 0.7, 0.3, 0.3, 0.7;
  return m;
}

ProcessConfig sampled_config(Eigen::Index n, std::uint64_t seed) {
  ProcessConfig cfg;
  cfg.n = n;
  cfg.chain = ChainSource::sampled(DsSampler::Sinkhorn);
  cfg.rate = 6.0;
  cfg.horizon = 2.0;
  cfg.initial_state = Eigen::Index{0};
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("reduction times form a Poisson stream on (0, horizon]") {
  CHECK(sample_reduction_times(0.0, 5.0, 1).empty());
  CHECK_THROWS_AS(sample_reduction_times(-1.0, 5.0, 1), Error);
  CHECK_THROWS_AS(sample_reduction_times(2.0, 0.0, 1), Error);

  const std::vector<double> times = sample_reduction_times(3.0, 10.0, 7);
  CHECK(times == sample_reduction_times(3.0, 10.0, 7));
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(times[k] > 0.0);
    CHECK(times[k] <= 10.0);
    if (k > 0) CHECK(times[k] > times[k - 1]);
  }
}

TEST_CASE("Poisson statistics at rate 2 over horizon 1000") {
  const std::vector<double> times = sample_reduction_times(2.0, 1000.0, 2024);
  const double count = static_cast<double>(times.size());
  CHECK(std::abs(count - 2000.0) <= 3.0 * std::sqrt(2000.0));

  double last = 0.0, total = 0.0;
  for (const double t : times) {
    total += t - last;
    last = t;
  }
  const double mean_gap = total / count;
  CHECK(std::abs(mean_gap - 0.5) <= 0.025);
}

TEST_CASE("chain sources") {
  const ChainSource fixed = ChainSource::fixed(validate(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(fixed.mode() == ChainSource::Mode::Fixed);
  CHECK(fixed.fixed_matrix().dim() == 2);
  CHECK((fixed.matrix_at(5, 2, 1).entries() - Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK_THROWS_AS(fixed.matrix_at(0, 3, 1), Error);  // dimension disagrees

  const ChainSource sampled = ChainSource::sampled(DsSampler::PermutationMixture);
  CHECK_THROWS_AS(sampled.fixed_matrix(), Error);
  const StochasticMatrix a = sampled.matrix_at(0, 4, 9);
  CHECK((a.entries() - sampled.matrix_at(0, 4, 9).entries()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.entries() - sampled.matrix_at(1, 4, 9).entries()).cwiseAbs().maxCoeff() > 1e-6);
  CHECK(a.doubly_stochastic());
}

TEST_CASE("trajectory through the flat chain is frozen") {
  const TrajectoryRecord r = run_trajectory(flat_config());
  REQUIRE_FALSE(r.times.empty());
  CHECK(r.states.size() == r.times.size());
  CHECK(r.distances.size() == r.times.size());
  CHECK(r.dobrushin_bounds.size() == r.times.size());
  CHECK(r.entropies.rows() == static_cast<Eigen::Index>(r.times.size()));
  CHECK(r.entropies.cols() == 3);
  CHECK(r.dimension == 2);
  CHECK(r.initial_state == 0);

  for (Eigen::Index k = 0; k < r.entropies.rows(); ++k) {
    for (Eigen::Index a = 0; a < r.entropies.cols(); ++a) {
      CHECK(r.entropies(k, a) == 0.6931471805599453);  // ln 2, every order
    }
    CHECK(r.distances[static_cast<std::size_t>(k)] == 0.0);
    CHECK(r.dobrushin_bounds[static_cast<std::size_t>(k)] == 0.0);  // tau(flat) = 0
  }
}

TEST_CASE("records are reproducible bit for bit") {
  const ProcessConfig cfg = sampled_config(4, 31);
  const TrajectoryRecord a = run_trajectory(cfg);
  const TrajectoryRecord b = run_trajectory(cfg);
  CHECK(a == b);

  ProcessConfig other = cfg;
  other.seed = 32;
  CHECK_FALSE(a == run_trajectory(other));
}

TEST_CASE("initial state variants") {
  ProcessConfig cfg = flat_config();
  cfg.initial_state = Eigen::Index{1};
  CHECK(run_trajectory(cfg).initial_state == 1);

  cfg.initial_state = ProbabilityVector::basis(2, 1);
  CHECK(run_trajectory(cfg).initial_state == 1);  // deterministic distribution

  cfg.initial_state = Eigen::Index{2};
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
  cfg.initial_state = uniform_state(3);
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
}

TEST_CASE("config validation") {
  ProcessConfig cfg = flat_config();
  cfg.n = 0;
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
  cfg = flat_config();
  cfg.rate = -2.0;
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
  cfg = flat_config();
  cfg.horizon = 0.0;
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
  cfg = flat_config();
  cfg.alphas.clear();
  CHECK_THROWS_AS(run_trajectory(cfg), Error);
}

TEST_CASE("ensemble agrees with its first trajectory and any thread count") {
  const ProcessConfig cfg = sampled_config(3, 17);
  const EnsembleReport serial = run_ensemble(cfg, 24, 1);
  const EnsembleReport parallel = run_ensemble(cfg, 24, 4);

  REQUIRE(serial.records.size() == 24);
  REQUIRE(parallel.records.size() == 24);
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    CHECK(serial.records[i] == parallel.records[i]);
  }
  CHECK((serial.final_distribution - parallel.final_distribution).cwiseAbs().maxCoeff() == 0.0);
  CHECK((serial.empirical_final - parallel.empirical_final).cwiseAbs().maxCoeff() == 0.0);
  CHECK(serial.records[0] == run_trajectory(cfg));

  CHECK(serial.dobrushin_bounds.front() == 1.0);
  CHECK(std::abs(serial.final_distribution.sum() - 1.0) <= 1e-12);
  CHECK(std::abs(serial.empirical_final.sum() - 1.0) <= 1e-12);
  CHECK(serial.entropies.rows() == static_cast<Eigen::Index>(serial.times.size()) + 1);

  // Exact distribution: entropy monotone, distance within the running bound.
  for (Eigen::Index k = 0; k + 1 < serial.entropies.rows(); ++k) {
    for (Eigen::Index a = 0; a < serial.entropies.cols(); ++a) {
      CHECK(serial.entropies(k + 1, a) >= serial.entropies(k, a) - 1e-10);
    }
  }
  for (std::size_t k = 0; k < serial.distances.size(); ++k) {
    CHECK(serial.distances[k] <=
          serial.dobrushin_bounds[k] * serial.distances.front() + 1e-9);
  }
}

TEST_CASE("empirical frequencies approach the exact distribution") {
  ProcessConfig cfg = flat_config();
  cfg.horizon = 1.0;
  const EnsembleReport report = run_ensemble(cfg, 4000, 4);
  REQUIRE_FALSE(report.times.empty());
  // Flat chain: exact distribution is uniform; 3 sigma around 1/2 at T=4000.
  CHECK((report.final_distribution.array() - 0.5).abs().maxCoeff() <= 1e-12);
  CHECK((report.empirical_final - report.final_distribution).cwiseAbs().maxCoeff() <=
        3.0 * std::sqrt(0.25 / 4000.0));
}

TEST_CASE("history probabilities multiply the chain entries") {
  const StochasticMatrix m = validate(sym2_helper());
  const std::vector<StochasticMatrix> chain = {m, m};
  CHECK(history_probability(chain, {0, 1, 0}) == 0.09);
  CHECK(history_probability(chain, {0, 0, 0}) == 0.7 * 0.7);

  // Continuations of a fixed start sum to one.
  const std::vector<StochasticMatrix> random_chain = {
      sample_ds(3, DsSampler::Sinkhorn, 1), sample_ds(3, DsSampler::PermutationMixture, 2),
      sample_stochastic(3, 3)};
  double total = 0.0;
  for (Eigen::Index a = 0; a < 3; ++a) {
    for (Eigen::Index b = 0; b < 3; ++b) {
      for (Eigen::Index c = 0; c < 3; ++c) {
        total += history_probability(random_chain, {1, a, b, c});
      }
    }
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);

  CHECK_THROWS_AS(history_probability(chain, {0, 1}), Error);
  CHECK_THROWS_AS(history_probability(chain, {0, 1, 2}), Error);
  CHECK_THROWS_AS(history_probability({}, {0}), Error);
}

TEST_CASE("chain contraction is submultiplicative") {
  const StochasticMatrix m = validate(sym2_helper());
  const ChainContraction two = chain_contraction({m, m});
  CHECK(std::abs(two.product_coefficient - 0.16) <= 1e-15);
  CHECK(std::abs(two.coefficient_product - 0.16) <= 1e-15);
  CHECK(two.product_coefficient <= two.coefficient_product + 1e-10);

  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    std::vector<StochasticMatrix> chain;
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 4);
    for (std::uint64_t k = 0; k <= seed % 10; ++k) {
      chain.push_back(sample_ds(n, static_cast<DsSampler>(k % 3), seed * 100 + k));
    }
    const ChainContraction c = chain_contraction(chain);
    CHECK(c.product_coefficient <= c.coefficient_product + 1e-10);
  }

  CHECK_THROWS_AS(chain_contraction({}), Error);
  CHECK_THROWS_AS(chain_contraction({m, sample_ds(3, DsSampler::Sinkhorn, 1)}), Error);
  CHECK_THROWS_AS(chain_contraction({sample_stochastic(2, 1)}), Error);
}

}  // TEST_SUITE
