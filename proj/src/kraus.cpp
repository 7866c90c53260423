#include "dsq/kraus.hpp"

#include <Eigen/QR>
#include <cmath>
#include <sstream>

#include "dsq/entropy.hpp"
#include "dsq/error.hpp"

namespace dsq {

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

KrausSet::KrausSet(std::vector<Eigen::MatrixXcd> operators, double tol) : ops_(std::move(operators)) {
  if (ops_.empty()) fail(ErrorCode::InvalidKrausSet, "operator list is empty");
  const Eigen::Index n = ops_.front().rows();
  if (n < 1) fail(ErrorCode::InvalidKrausSet, "operators must be at least 1x1");
  for (const auto& a : ops_) {
    if (a.rows() != n || a.cols() != n) {
      fail(ErrorCode::InvalidKrausSet, "operators must all be square of equal dimension");
    }
  }
  Eigen::MatrixXcd left = Eigen::MatrixXcd::Zero(n, n);   // sum A†A
  Eigen::MatrixXcd right = Eigen::MatrixXcd::Zero(n, n);  // sum A A†
  for (const auto& a : ops_) {
    left += a.adjoint() * a;
    right += a * a.adjoint();
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  tp_residual_ = max_abs(left - id);
  unital_residual_ = max_abs(right - id);
  if (tp_residual_ > tol) {
    std::ostringstream msg;
    msg << "sum A†A deviates from identity by " << tp_residual_;
    fail(ErrorCode::InvalidKrausSet, msg.str());
  }
  unital_ = unital_residual_ <= tol;
}

ProjectorSet::ProjectorSet(std::vector<Eigen::MatrixXcd> projectors, double tol)
    : ps_(std::move(projectors)) {
  if (ps_.empty()) fail(ErrorCode::InvalidProjectorSet, "projector list is empty");
  const Eigen::Index n = ps_.front().rows();
  if (n < 1) fail(ErrorCode::InvalidProjectorSet, "projectors must be at least 1x1");
  for (std::size_t k = 0; k < ps_.size(); ++k) {
    const auto& p = ps_[k];
    if (p.rows() != n || p.cols() != n) {
      fail(ErrorCode::InvalidProjectorSet, "projectors must all be square of equal dimension");
    }
    if (max_abs(p - p.adjoint()) > tol) {
      fail(ErrorCode::InvalidProjectorSet, "projector is not Hermitian");
    }
    if (max_abs(p * p - p) > tol) {
      fail(ErrorCode::InvalidProjectorSet, "projector is not idempotent");
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (max_abs(ps_[l] * p) > tol) {
        fail(ErrorCode::InvalidProjectorSet, "projectors are not mutually orthogonal");
      }
    }
  }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& p : ps_) sum += p;
  if (max_abs(sum - Eigen::MatrixXcd::Identity(n, n)) > tol) {
    fail(ErrorCode::InvalidProjectorSet, "projectors do not sum to the identity");
  }
}

StochasticMatrix kraus_to_ds(const KrausSet& k, double tol) {
  const Eigen::Index n = k.dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& a : k.operators()) m += a.cwiseAbs2();
  return validate(m, tol);
}

KrausSet ds_to_kraus(const StochasticMatrix& m, bool drop_zero) {
  if (!m.doubly_stochastic()) {
    fail(ErrorCode::NotDoublyStochastic, "ds_to_kraus needs a doubly stochastic matrix");
  }
  const Eigen::Index n = m.dim();
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (drop_zero && m(i, j) == 0.0) continue;
      Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
      a(i, j) = std::sqrt(m(i, j));
      ops.push_back(std::move(a));
    }
  }
  return KrausSet(std::move(ops));
}

StochasticMatrix unitary_to_ds(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) {
    fail(ErrorCode::NotUnitary, "matrix is not square");
  }
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  const double residual = max_abs(u.adjoint() * u - id);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "U†U deviates from identity by " << residual;
    fail(ErrorCode::NotUnitary, msg.str());
  }
  return validate(u.cwiseAbs2(), tol);
}

Eigen::MatrixXcd apply_channel(const KrausSet& k, const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() != k.dim() || rho.cols() != k.dim()) {
    fail(ErrorCode::DimensionMismatch, "channel and state dimensions differ");
  }
  density_spectrum(rho, tol);  // rejects non-density inputs
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& a : k.operators()) out += a * rho * a.adjoint();
  return out;
}

Eigen::MatrixXcd luders_dephase(const Eigen::MatrixXcd& rho, const ProjectorSet& p, double tol) {
  if (rho.rows() != p.dim() || rho.cols() != p.dim()) {
    fail(ErrorCode::DimensionMismatch, "projector and state dimensions differ");
  }
  density_spectrum(rho, tol);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& proj : p.projectors()) out += proj * rho * proj;
  return out;
}

Eigen::MatrixXcd random_unitary(Eigen::Index n, Rng& rng) {
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
  return q;
}

Eigen::MatrixXcd random_unitary(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Rng rng(derive_subseed(seed, 0x5531u));
  return random_unitary(n, rng);
}

KrausSet random_unital_channel(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (n < 1 || k < 1) fail(ErrorCode::InvalidArgument, "need n >= 1 and k >= 1");
  Rng rng(derive_subseed(seed, 0x554eu));
  const Eigen::VectorXd weights = random_simplex_point(k, rng);
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    ops.push_back(std::sqrt(weights(i)) * random_unitary(n, rng));
  }
  return KrausSet(std::move(ops));
}

KrausSet random_trace_preserving_channel(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (n < 1 || k < 1) fail(ErrorCode::InvalidArgument, "need n >= 1 and k >= 1");
  Rng rng(derive_subseed(seed, 0x5450u));
  // Haar isometry: thin QR of a (nk) x n Ginibre matrix; the k row blocks
  // satisfy sum A†A = V†V = I.
  Eigen::MatrixXcd g(n * k, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n * k; ++i)
      g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd v =
      qr.householderQ() * Eigen::MatrixXcd::Identity(n * k, n);
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(static_cast<std::size_t>(k));
  for (Eigen::Index alpha = 0; alpha < k; ++alpha) {
    ops.push_back(v.middleRows(alpha * n, n));
  }
  return KrausSet(std::move(ops));
}

Eigen::MatrixXcd random_density_matrix(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  Rng rng(derive_subseed(seed, 0x4d58u));
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      g(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

ProjectorSet random_projector_set(Eigen::Index n, Eigen::Index k, std::uint64_t seed) {
  if (n < 1 || k < 1 || k > n) fail(ErrorCode::InvalidArgument, "need 1 <= k <= n");
  Rng rng(derive_subseed(seed, 0x5053u));
  const Eigen::MatrixXcd u = random_unitary(n, rng);
  std::vector<Eigen::MatrixXcd> ps;
  ps.reserve(static_cast<std::size_t>(k));
  Eigen::Index start = 0;
  for (Eigen::Index g = 0; g < k; ++g) {
    const Eigen::Index size = n / k + (g < n % k ? 1 : 0);
    const Eigen::MatrixXcd block = u.middleCols(start, size);
    ps.push_back(block * block.adjoint());
    start += size;
  }
  return ProjectorSet(std::move(ps));
}

}  // namespace dsq
