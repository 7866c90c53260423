#include "dsq/simplex.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace dsq {

ProbabilityVector::ProbabilityVector(Eigen::VectorXd p, double tol) : p_(std::move(p)) {
  if (p_.size() == 0) fail(ErrorCode::InvalidArgument, "probability vector is empty");
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (p_(i) < -tol) {
      std::ostringstream msg;
      msg << "entry " << i << " is " << p_(i);
      fail(ErrorCode::NegativeEntry, msg.str());
    }
    if (p_(i) < 0.0) p_(i) = 0.0;
  }
  const double sum = p_.sum();
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream msg;
    msg << "entries sum to " << sum;
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  p_ /= sum;
}

ProbabilityVector ProbabilityVector::basis(Eigen::Index n, Eigen::Index i) {
  if (n < 1 || i < 0 || i >= n) fail(ErrorCode::InvalidArgument, "basis index out of range");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(i) = 1.0;
  return ProbabilityVector(std::move(p));
}

StochasticMatrix validate(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    std::ostringstream msg;
    msg << matrix.rows() << "x" << matrix.cols();
    fail(ErrorCode::NonSquare, msg.str());
  }
  if (tol <= 0.0) fail(ErrorCode::InvalidArgument, "tol must be positive");

  Eigen::MatrixXd m = matrix;
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (m(i, j) < -tol) {
        std::ostringstream msg;
        msg << "entry (" << i << "," << j << ") is " << m(i, j);
        fail(ErrorCode::NegativeEntry, msg.str());
      }
      if (m(i, j) < 0.0) m(i, j) = 0.0;
    }
    const double colsum = m.col(j).sum();
    if (std::abs(colsum - 1.0) > tol) {
      std::ostringstream msg;
      msg << "column " << j << " sums to " << colsum << " (deviation " << colsum - 1.0 << ")";
      fail(ErrorCode::ColumnSumViolation, msg.str());
    }
    m.col(j) /= colsum;
  }

  const bool rows_unit = (m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
  return StochasticMatrix(std::move(m), rows_unit ? MatrixKind::DoublyStochastic
                                                  : MatrixKind::ColumnStochastic);
}

ProbabilityVector uniform_state(Eigen::Index n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  return ProbabilityVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector apply(const StochasticMatrix& m, const ProbabilityVector& p) {
  if (m.dim() != p.size()) fail(ErrorCode::DimensionMismatch, "matrix and vector sizes differ");
  return ProbabilityVector(m.entries() * p.coeffs());
}

double dobrushin_coefficient(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.cols();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k)
      worst = std::max(worst, (m.col(j) - m.col(k)).cwiseAbs().sum());
  return 0.5 * worst;
}

double dobrushin_coefficient(const StochasticMatrix& m) {
  return dobrushin_coefficient(m.entries());
}

namespace {

// Orthonormal basis of the zero-sum subspace: the trailing n-1 columns of a
// Householder Q whose first column is the normalized all-ones vector.
Eigen::MatrixXd zero_sum_basis(Eigen::Index n) {
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

}  // namespace

double subdominant_singular_value(const StochasticMatrix& m) {
  const Eigen::Index n = m.dim();
  if (n == 1) return 0.0;
  const Eigen::MatrixXd basis = zero_sum_basis(n);
  const Eigen::MatrixXd restricted = basis.transpose() * m.entries() * basis;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
  if (svd.info() != Eigen::Success)
    fail(ErrorCode::ComputationFailed, "singular value decomposition failed");
  return svd.singularValues()(0);
}

ContractionReport contraction_report(const StochasticMatrix& m, double generic_tol) {
  ContractionReport report;
  report.dobrushin = dobrushin_coefficient(m);
  report.subdominant_singular = subdominant_singular_value(m);
  report.is_generic = report.dobrushin < 1.0 - generic_tol;
  return report;
}

double induced_norm(const Eigen::MatrixXd& m, double alpha) {
  if (alpha == 1.0) return m.cwiseAbs().colwise().sum().maxCoeff();
  if (std::isinf(alpha)) return m.cwiseAbs().rowwise().sum().maxCoeff();
  if (alpha == 2.0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  fail(ErrorCode::InvalidArgument, "induced norm supports alpha in {1, 2, inf}");
}

Eigen::VectorXd random_simplex_point(Eigen::Index n, Rng& rng) {
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = -std::log(rng.uniform_open());
  return p / p.sum();
}

Eigen::MatrixXd random_permutation_matrix(Eigen::Index n, Rng& rng) {
  const auto perm = rng.permutation(static_cast<int>(n));
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) p(perm[static_cast<std::size_t>(j)], j) = 1.0;
  return p;
}

namespace {

Eigen::MatrixXd sample_permutation_mixture(Eigen::Index n, Rng& rng) {
  const Eigen::Index terms = n + 1;
  Eigen::VectorXd weights = random_simplex_point(terms, rng);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index t = 0; t < terms; ++t)
    m += weights(t) * random_permutation_matrix(n, rng);
  return m;
}

// Alternating row/column normalization of an entrywise positive matrix.
// Positivity guarantees convergence; the iteration is pushed well below the
// ingestion tolerance so downstream peeling sees an exactly balanced matrix.
Eigen::MatrixXd sample_sinkhorn(Eigen::Index n, Rng& rng) {
  constexpr int kMaxIters = 10000;
  constexpr double kTarget = 5e-15;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = rng.uniform_open() + 1e-3;
  double residual = 1.0;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    for (Eigen::Index j = 0; j < n; ++j) m.col(j) /= m.col(j).sum();
    for (Eigen::Index i = 0; i < n; ++i) m.row(i) /= m.row(i).sum();
    residual = std::max((m.colwise().sum().array() - 1.0).abs().maxCoeff(),
                        (m.rowwise().sum().array() - 1.0).abs().maxCoeff());
    if (residual <= kTarget) return m;
  }
  std::ostringstream msg;
  msg << "residual " << residual << " after " << kMaxIters << " iterations";
  fail(ErrorCode::SinkhornNotConverged, msg.str());
}

Eigen::MatrixXd sample_unistochastic(Eigen::Index n, Rng& rng) {
  // Haar unitary via QR of a complex Ginibre matrix with phase fix.
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q.cwiseAbs2();
}

}  // namespace

StochasticMatrix sample_ds(Eigen::Index n, DsSampler method, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (n == 1) return validate(Eigen::MatrixXd::Ones(1, 1));
  Rng rng(derive_subseed(seed, static_cast<std::uint64_t>(method)));
  Eigen::MatrixXd m;
  switch (method) {
    case DsSampler::PermutationMixture: m = sample_permutation_mixture(n, rng); break;
    case DsSampler::Sinkhorn: m = sample_sinkhorn(n, rng); break;
    case DsSampler::Unistochastic: m = sample_unistochastic(n, rng); break;
  }
  return validate(m, kPropertyTol);
}

StochasticMatrix sample_stochastic(Eigen::Index n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "dimension must be >= 2");
  Rng rng(derive_subseed(seed, 0x5354u));
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) = random_simplex_point(n, rng);
  return validate(m);
}

}  // namespace dsq
