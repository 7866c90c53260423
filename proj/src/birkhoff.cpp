#include "dsq/birkhoff.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "dsq/error.hpp"

namespace dsq {

namespace {

// Perfect matching of columns to rows on a 0/1 support by Kuhn's augmenting
// paths: a greedy pass grabs free rows first (this is what makes the
// near-diagonal case peel the identity), then unmatched columns augment.
// Scan order is ascending everywhere, so the matching is deterministic.
struct Matcher {
  const Eigen::MatrixXd& residual;
  double tol;
  std::vector<Eigen::Index> match_row;  // column matched to each row, -1 if free
  std::vector<char> visited;

  bool supported(Eigen::Index i, Eigen::Index j) const { return residual(i, j) > tol; }

  bool augment(Eigen::Index j) {
    const Eigen::Index n = residual.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!supported(i, j) || visited[static_cast<std::size_t>(i)]) continue;
      visited[static_cast<std::size_t>(i)] = 1;
      if (match_row[static_cast<std::size_t>(i)] < 0 ||
          augment(match_row[static_cast<std::size_t>(i)])) {
        match_row[static_cast<std::size_t>(i)] = j;
        return true;
      }
    }
    return false;
  }

  // sigma[j] = matched row for column j, or empty if no perfect matching.
  std::vector<Eigen::Index> perfect_matching() {
    const Eigen::Index n = residual.rows();
    match_row.assign(static_cast<std::size_t>(n), -1);
    std::vector<char> column_done(static_cast<std::size_t>(n), 0);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (supported(i, j) && match_row[static_cast<std::size_t>(i)] < 0) {
          match_row[static_cast<std::size_t>(i)] = j;
          column_done[static_cast<std::size_t>(j)] = 1;
          break;
        }
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (column_done[static_cast<std::size_t>(j)]) continue;
      visited.assign(static_cast<std::size_t>(n), 0);
      if (!augment(j)) return {};
    }
    std::vector<Eigen::Index> sigma(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      sigma[static_cast<std::size_t>(match_row[static_cast<std::size_t>(i)])] = i;
    }
    return sigma;
  }
};

}  // namespace

Eigen::MatrixXd permutation_matrix(const std::vector<Eigen::Index>& sigma) {
  const Eigen::Index n = static_cast<Eigen::Index>(sigma.size());
  if (n == 0) fail(ErrorCode::InvalidArgument, "permutation is empty");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const Eigen::Index row : sigma) {
    if (row < 0 || row >= n || seen[static_cast<std::size_t>(row)]) {
      fail(ErrorCode::InvalidArgument, "index vector is not a permutation");
    }
    seen[static_cast<std::size_t>(row)] = 1;
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p(sigma[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

BirkhoffDecomposition birkhoff_decompose(const StochasticMatrix& m, double tol) {
  if (!m.doubly_stochastic()) {
    fail(ErrorCode::NotDoublyStochastic, "decomposition needs a doubly stochastic matrix");
  }
  if (tol <= 0.0) fail(ErrorCode::InvalidArgument, "tol must be positive");
  const Eigen::Index n = m.dim();
  const Eigen::Index cap = n * n - 2 * n + 2;

  Eigen::MatrixXd residual = m.entries();
  BirkhoffDecomposition out;
  while (residual.maxCoeff() > tol) {
    if (out.terms() >= cap) {
      std::ostringstream msg;
      msg << "more than " << cap << " terms for n = " << n;
      fail(ErrorCode::TermLimitExceeded, msg.str());
    }
    Matcher matcher{residual, tol, {}, {}};
    std::vector<Eigen::Index> sigma = matcher.perfect_matching();
    if (sigma.empty()) {
      fail(ErrorCode::NoPerfectMatching,
           "support has no perfect matching; input is not doubly stochastic to within tol");
    }
    double weight = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      weight = std::min(weight, residual(sigma[static_cast<std::size_t>(j)], j));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      double& cell = residual(sigma[static_cast<std::size_t>(j)], j);
      cell = std::max(cell - weight, 0.0);
    }
    out.weights.push_back(weight);
    out.permutations.push_back(std::move(sigma));
  }
  return out;
}

StochasticMatrix recompose(const BirkhoffDecomposition& d, double tol) {
  if (d.weights.empty() || d.weights.size() != d.permutations.size()) {
    fail(ErrorCode::InvalidArgument, "weights and permutations must be non-empty and aligned");
  }
  double total = 0.0;
  for (const double w : d.weights) {
    if (w <= 0.0) fail(ErrorCode::InvalidArgument, "weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > kPropertyTol) {
    std::ostringstream msg;
    msg << "weights sum to " << total;
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d.permutations.front().size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < d.weights.size(); ++t) {
    if (static_cast<Eigen::Index>(d.permutations[t].size()) != n) {
      fail(ErrorCode::DimensionMismatch, "permutations have mixed dimensions");
    }
    sum += d.weights[t] * permutation_matrix(d.permutations[t]);
  }
  return validate(sum, tol);
}

}  // namespace dsq
