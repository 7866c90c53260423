#include "dsq/process.hpp"

#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "dsq/error.hpp"
#include "dsq/rng.hpp"

namespace dsq {

namespace {

// Sub-stream labels hanging off the master seed. Times, chain, and each
// trajectory draw from disjoint streams so that no consumer shifts another,
// whatever the evaluation order.
constexpr std::uint64_t kTimesStream = 1;
constexpr std::uint64_t kChainStream = 2;
constexpr std::uint64_t kTrajectoryStream = 3;

// Inverse-CDF draw from p at quantile r, scanning low to high with ties
// toward the lower index; entries that are exactly zero can never win.
Eigen::Index reduction_sample(const Eigen::VectorXd& p, double r) {
  Eigen::Index last_positive = 0;
  double cum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    last_positive = i;
    cum += p(i);
    if (r <= cum) return i;
  }
  return last_positive;
}

void check_config(const ProcessConfig& cfg) {
  if (cfg.n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (cfg.rate < 0.0) fail(ErrorCode::InvalidArgument, "rate must be >= 0");
  if (cfg.horizon <= 0.0) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
  if (cfg.alphas.empty()) fail(ErrorCode::InvalidArgument, "need at least one entropy order");
  if (const auto* index = std::get_if<Eigen::Index>(&cfg.initial_state)) {
    if (*index < 0 || *index >= cfg.n) {
      fail(ErrorCode::InvalidArgument, "initial basis index out of range");
    }
  } else if (std::get<ProbabilityVector>(cfg.initial_state).size() != cfg.n) {
    fail(ErrorCode::DimensionMismatch, "initial state dimension differs from n");
  }
  if (cfg.chain.mode() == ChainSource::Mode::Fixed &&
      cfg.chain.fixed_matrix().dim() != cfg.n) {
    fail(ErrorCode::DimensionMismatch, "chain matrix dimension differs from n");
  }
}

struct ChainData {
  std::vector<double> times;
  std::vector<StochasticMatrix> matrices;
  std::vector<double> bounds;  // running product of Dobrushin coefficients
};

ChainData materialize_chain(const ProcessConfig& cfg) {
  ChainData data;
  data.times = sample_reduction_times(cfg.rate, cfg.horizon, cfg.seed);
  const std::uint64_t chain_seed = derive_subseed(cfg.seed, kChainStream);
  double running = 1.0;
  data.matrices.reserve(data.times.size());
  data.bounds.reserve(data.times.size());
  for (std::size_t k = 0; k < data.times.size(); ++k) {
    data.matrices.push_back(
        cfg.chain.matrix_at(static_cast<Eigen::Index>(k), cfg.n, chain_seed));
    running *= dobrushin_coefficient(data.matrices.back());
    data.bounds.push_back(running);
  }
  return data;
}

TrajectoryRecord simulate_one(const ProcessConfig& cfg, const ChainData& chain,
                              std::uint64_t trajectory_seed) {
  Rng rng(trajectory_seed);
  Eigen::Index state;
  if (const auto* index = std::get_if<Eigen::Index>(&cfg.initial_state)) {
    state = *index;
  } else {
    state = reduction_sample(std::get<ProbabilityVector>(cfg.initial_state).coeffs(),
                             rng.uniform());
  }

  const std::size_t steps = chain.times.size();
  TrajectoryRecord record;
  record.alphas = cfg.alphas;
  record.dimension = cfg.n;
  record.initial_state = state;
  record.times = chain.times;
  record.states.resize(steps);
  record.distances.resize(steps);
  record.dobrushin_bounds = chain.bounds;
  record.entropies.resize(static_cast<Eigen::Index>(steps),
                          static_cast<Eigen::Index>(cfg.alphas.size()));
  for (std::size_t k = 0; k < steps; ++k) {
    const ProbabilityVector p(chain.matrices[k].entries().col(state));
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      record.entropies(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) =
          renyi_entropy(p, cfg.alphas[a]);
    }
    record.distances[k] = l1_distance_to_uniform(p.coeffs());
    state = reduction_sample(p.coeffs(), rng.uniform());
    record.states[k] = state;
  }
  return record;
}

}  // namespace

ChainSource ChainSource::fixed(StochasticMatrix m) {
  ChainSource source;
  source.mode_ = Mode::Fixed;
  source.fixed_.push_back(std::move(m));
  return source;
}

ChainSource ChainSource::sampled(DsSampler method) {
  ChainSource source;
  source.mode_ = Mode::Sampled;
  source.method_ = method;
  return source;
}

const StochasticMatrix& ChainSource::fixed_matrix() const {
  if (fixed_.empty()) fail(ErrorCode::InvalidArgument, "chain source holds no fixed matrix");
  return fixed_.front();
}

StochasticMatrix ChainSource::matrix_at(Eigen::Index step, Eigen::Index n,
                                        std::uint64_t chain_seed) const {
  if (mode_ == Mode::Fixed) {
    const StochasticMatrix& m = fixed_matrix();
    if (m.dim() != n) fail(ErrorCode::DimensionMismatch, "chain matrix dimension differs from n");
    return m;
  }
  return sample_ds(n, method_, derive_subseed(chain_seed, static_cast<std::uint64_t>(step)));
}

bool TrajectoryRecord::operator==(const TrajectoryRecord& other) const {
  if (times != other.times || states != other.states || distances != other.distances ||
      dobrushin_bounds != other.dobrushin_bounds || dimension != other.dimension ||
      initial_state != other.initial_state) {
    return false;
  }
  if (!(alphas == other.alphas)) return false;
  if (entropies.rows() != other.entropies.rows() || entropies.cols() != other.entropies.cols()) {
    return false;
  }
  return entropies.size() == 0 || (entropies.array() == other.entropies.array()).all();
}

std::vector<double> sample_reduction_times(double rate, double horizon, std::uint64_t seed) {
  if (rate < 0.0) fail(ErrorCode::InvalidArgument, "rate must be >= 0");
  if (horizon <= 0.0) fail(ErrorCode::InvalidArgument, "horizon must be > 0");
  std::vector<double> times;
  if (rate == 0.0) return times;
  Rng rng(derive_subseed(seed, kTimesStream));
  double t = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > horizon) break;
    times.push_back(t);
  }
  return times;
}

TrajectoryRecord run_trajectory(const ProcessConfig& cfg) {
  check_config(cfg);
  const ChainData chain = materialize_chain(cfg);
  const std::uint64_t base = derive_subseed(cfg.seed, kTrajectoryStream);
  return simulate_one(cfg, chain, derive_subseed(base, 0));
}

EnsembleReport run_ensemble(const ProcessConfig& cfg, Eigen::Index trajectories, int threads) {
  check_config(cfg);
  if (trajectories < 1) fail(ErrorCode::InvalidArgument, "need at least one trajectory");
  if (threads < 1) threads = 1;

  const ChainData chain = materialize_chain(cfg);
  const std::size_t steps = chain.times.size();

  EnsembleReport report;
  report.times = chain.times;
  report.alphas = cfg.alphas;
  report.trajectory_count = trajectories;
  report.entropies.resize(static_cast<Eigen::Index>(steps) + 1,
                          static_cast<Eigen::Index>(cfg.alphas.size()));
  report.distances.resize(steps + 1);
  report.dobrushin_bounds.resize(steps + 1);
  report.dobrushin_bounds[0] = 1.0;
  for (std::size_t k = 0; k < steps; ++k) report.dobrushin_bounds[k + 1] = chain.bounds[k];

  // Non-selective branch: the exact distribution under the same chain.
  ProbabilityVector p = std::holds_alternative<Eigen::Index>(cfg.initial_state)
                            ? ProbabilityVector::basis(cfg.n, std::get<Eigen::Index>(cfg.initial_state))
                            : std::get<ProbabilityVector>(cfg.initial_state);
  for (std::size_t k = 0; k <= steps; ++k) {
    if (k > 0) p = apply(chain.matrices[k - 1], p);
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
      report.entropies(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a)) =
          renyi_entropy(p, cfg.alphas[a]);
    }
    report.distances[k] = l1_distance_to_uniform(p.coeffs());
  }
  report.final_distribution = p.coeffs();

  // Selective branch: independent sub-seeded trajectories, written into
  // their own slots so the merge is order-independent by construction.
  report.records.resize(static_cast<std::size_t>(trajectories));
  const std::uint64_t base = derive_subseed(cfg.seed, kTrajectoryStream);
  std::exception_ptr failure;
  std::mutex failure_guard;
  auto worker = [&](int offset) {
    try {
      for (Eigen::Index i = offset; i < trajectories; i += threads) {
        report.records[static_cast<std::size_t>(i)] =
            simulate_one(cfg, chain, derive_subseed(base, static_cast<std::uint64_t>(i)));
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_guard);
      if (!failure) failure = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  report.empirical_final = Eigen::VectorXd::Zero(cfg.n);
  for (const TrajectoryRecord& record : report.records) {
    const Eigen::Index final_state =
        record.states.empty() ? record.initial_state : record.states.back();
    report.empirical_final(final_state) += 1.0;
  }
  report.empirical_final /= static_cast<double>(trajectories);
  return report;
}

double history_probability(const std::vector<StochasticMatrix>& chain,
                           const std::vector<Eigen::Index>& history) {
  if (chain.empty()) fail(ErrorCode::InvalidArgument, "chain must not be empty");
  if (history.size() != chain.size() + 1) {
    std::ostringstream msg;
    msg << "history of length " << history.size() << " needs a chain of length "
        << history.size() - 1 << ", got " << chain.size();
    fail(ErrorCode::DimensionMismatch, msg.str());
  }
  double prob = 1.0;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Eigen::Index n = chain[k].dim();
    const Eigen::Index from = history[k];
    const Eigen::Index to = history[k + 1];
    if (from < 0 || from >= n || to < 0 || to >= n) {
      fail(ErrorCode::InvalidArgument, "history index out of range");
    }
    prob *= chain[k](to, from);
  }
  return prob;
}

ChainContraction chain_contraction(const std::vector<StochasticMatrix>& chain) {
  if (chain.empty()) fail(ErrorCode::InvalidArgument, "chain is empty");
  const Eigen::Index n = chain.front().dim();
  for (const StochasticMatrix& m : chain) {
    if (m.dim() != n) fail(ErrorCode::DimensionMismatch, "chain matrices have mixed dimensions");
    if (!m.doubly_stochastic()) {
      fail(ErrorCode::NotDoublyStochastic, "chain contraction needs doubly stochastic factors");
    }
  }
  ChainContraction out;
  out.coefficient_product = 1.0;
  Eigen::MatrixXd product = Eigen::MatrixXd::Identity(n, n);
  for (const StochasticMatrix& m : chain) {
    out.coefficient_product *= dobrushin_coefficient(m);
    product = m.entries() * product;  // chain applied left to right
  }
  out.product_coefficient = dobrushin_coefficient(validate(product, kPropertyTol));
  return out;
}

}  // namespace dsq
