#include "dsq/dilation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "dsq/error.hpp"

namespace dsq {

namespace {

constexpr Eigen::Index kMaxDim = 16;
constexpr double kCompletionThreshold = 1e-8;

// Orthonormal basis of range(base)^perp by modified Gram-Schmidt over the
// standard basis, taken in the requested order. Two orthogonalization
// passes keep the contamination of an accepted vector near machine
// precision even when its raw residual is small.
Eigen::MatrixXcd complete_basis(const Eigen::MatrixXcd& base, CompletionOrder order) {
  const Eigen::Index dim = base.rows();
  const Eigen::Index have = base.cols();
  const Eigen::Index want = dim - have;
  Eigen::MatrixXcd extra(dim, want);
  Eigen::Index found = 0;
  for (Eigen::Index t = 0; t < dim && found < want; ++t) {
    const Eigen::Index pick = order == CompletionOrder::Forward ? t : dim - 1 - t;
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(dim, pick);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < have; ++c) {
        v -= base.col(c).dot(v) * base.col(c);
      }
      for (Eigen::Index c = 0; c < found; ++c) {
        v -= extra.col(c).dot(v) * extra.col(c);
      }
    }
    const double norm = v.norm();
    if (norm > kCompletionThreshold) {
      extra.col(found++) = v / norm;
    }
  }
  if (found != want) {
    fail(ErrorCode::ComputationFailed, "orthonormal completion fell short");
  }
  return extra;
}

}  // namespace

UnitaryDilation dilate(const KrausSet& k, CompletionOrder order) {
  if (!k.unital()) {
    std::ostringstream msg;
    msg << "sum A A† deviates from identity by " << k.unital_residual();
    fail(ErrorCode::NotBistochastic, msg.str());
  }
  const Eigen::Index n = k.dim();
  const Eigen::Index nops = k.count();
  if (n > kMaxDim || nops > kMaxDim) {
    fail(ErrorCode::InvalidArgument, "dilation is capped at 16 system dimensions and 16 operators");
  }
  const Eigen::Index half = n * nops;   // one bath copy
  const double root = std::sqrt(static_cast<double>(nops));

  // D stacks I/sqrt(N): its range is the diagonal subspace. S stacks the
  // Kraus operators: columns orthonormal by trace preservation.
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(half, n);
  Eigen::MatrixXcd s(half, n);
  for (Eigen::Index alpha = 0; alpha < nops; ++alpha) {
    d.middleRows(alpha * n, n) = Eigen::MatrixXcd::Identity(n, n) / root;
    s.middleRows(alpha * n, n) = k[static_cast<std::size_t>(alpha)];
  }

  UnitaryDilation out;
  out.n = n;
  out.kraus_count = nops;
  out.u = Eigen::MatrixXcd::Zero(2 * half, 2 * half);
  const Eigen::MatrixXcd diag_block = s * d.adjoint();
  out.u.topLeftCorner(half, half) = diag_block;
  out.u.bottomRightCorner(half, half) = diag_block;
  if (half > n) {
    const Eigen::MatrixXcd d_perp = complete_basis(d, order);
    const Eigen::MatrixXcd s_perp = complete_basis(s, order);
    const Eigen::MatrixXcd cross_block = s_perp * d_perp.adjoint();
    out.u.topRightCorner(half, half) = cross_block;
    out.u.bottomLeftCorner(half, half) = cross_block;
  }

  const double residual =
      (out.u.adjoint() * out.u - Eigen::MatrixXcd::Identity(2 * half, 2 * half))
          .cwiseAbs()
          .maxCoeff();
  if (residual > kDilationTol) {
    std::ostringstream msg;
    msg << "U†U deviates from identity by " << residual;
    fail(ErrorCode::UnitarityCheckFailed, msg.str());
  }

  out.bath_state = Eigen::VectorXcd::Zero(2 * nops);
  out.bath_state.head(nops).setConstant(1.0 / root);
  return out;
}

StochasticMatrix reduce_dilation(const UnitaryDilation& d, double tol) {
  const Eigen::Index n = d.n;
  const Eigen::Index bath = 2 * d.kraus_count;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(n * bath);
    for (Eigen::Index b = 0; b < bath; ++b) in(b * n + j) = d.bath_state(b);
    const Eigen::VectorXcd outv = d.u * in;
    for (Eigen::Index i = 0; i < n; ++i) {
      double total = 0.0;
      for (Eigen::Index b = 0; b < bath; ++b) total += std::norm(outv(b * n + i));
      m(i, j) = total;
    }
  }
  return validate(m, tol);
}

Eigen::MatrixXd paper_reconstruction(const UnitaryDilation& d) {
  const Eigen::Index n = d.n;
  const Eigen::Index bath = 2 * d.kraus_count;
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < bath; ++b) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        r(i, j) += std::norm(d.u(b * n + i, b * n + j));
      }
    }
  }
  return r / static_cast<double>(bath);
}

}  // namespace dsq
