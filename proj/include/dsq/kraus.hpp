#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dsq/rng.hpp"
#include "dsq/simplex.hpp"

namespace dsq {

// Finite family {A_alpha} of n x n complex operators defining the channel
// rho -> sum_alpha A rho A†. Construction enforces trace preservation
// (sum A†A = I); unitality (sum A A† = I) is recorded as a flag so that
// deliberately non-unital sets remain representable for converse tests.
class KrausSet {
 public:
  explicit KrausSet(std::vector<Eigen::MatrixXcd> operators, double tol = kPropertyTol);

  const std::vector<Eigen::MatrixXcd>& operators() const { return ops_; }
  const Eigen::MatrixXcd& operator[](std::size_t alpha) const { return ops_[alpha]; }
  Eigen::Index dim() const { return ops_.front().rows(); }
  Eigen::Index count() const { return static_cast<Eigen::Index>(ops_.size()); }

  bool unital() const { return unital_; }
  double trace_preserving_residual() const { return tp_residual_; }
  double unital_residual() const { return unital_residual_; }

 private:
  std::vector<Eigen::MatrixXcd> ops_;
  double tp_residual_ = 0.0;
  double unital_residual_ = 0.0;
  bool unital_ = false;
};

// Family {P_k} of orthogonal projectors resolving the identity. Construction
// checks Hermiticity, idempotence, mutual orthogonality, and completeness.
class ProjectorSet {
 public:
  explicit ProjectorSet(std::vector<Eigen::MatrixXcd> projectors, double tol = kPropertyTol);

  const std::vector<Eigen::MatrixXcd>& projectors() const { return ps_; }
  Eigen::Index dim() const { return ps_.front().rows(); }
  Eigen::Index count() const { return static_cast<Eigen::Index>(ps_.size()); }

 private:
  std::vector<Eigen::MatrixXcd> ps_;
};

// M_ij = sum_alpha |<i|A_alpha|j>|^2. Column-stochastic for every
// trace-preserving set; doubly stochastic exactly when the set is unital.
StochasticMatrix kraus_to_ds(const KrausSet& k, double tol = kPropertyTol);

// A_(i,j) = |i> sqrt(M_ij) <j|, one operator per matrix entry (n^2 of them,
// or fewer with drop_zero). Requires a doubly stochastic input; that is what
// makes the set unital as well as trace-preserving.
KrausSet ds_to_kraus(const StochasticMatrix& m, bool drop_zero = false);

// M_ij = |U_ij|^2 (unistochastic descent, the single-operator case).
StochasticMatrix unitary_to_ds(const Eigen::MatrixXcd& u, double tol = kPropertyTol);

// rho' = sum_alpha A rho A†. Validates rho as a density matrix first.
Eigen::MatrixXcd apply_channel(const KrausSet& k, const Eigen::MatrixXcd& rho,
                               double tol = kPropertyTol);

// rho' = sum_k P rho P: the non-selective projective gate. Unital, so it can
// only raise entropy; idempotent as a map.
Eigen::MatrixXcd luders_dephase(const Eigen::MatrixXcd& rho, const ProjectorSet& p,
                                double tol = kPropertyTol);

// Haar-distributed unitary (QR of a complex Ginibre matrix with the phase
// fix that makes the distribution exactly invariant).
Eigen::MatrixXcd random_unitary(Eigen::Index n, Rng& rng);
Eigen::MatrixXcd random_unitary(Eigen::Index n, std::uint64_t seed);

// {sqrt(w_i) U_i} for random weights and Haar unitaries: unital and
// trace-preserving by construction.
KrausSet random_unital_channel(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

// Blocks of a Haar random nk x n isometry: trace-preserving always,
// generically non-unital for k >= 2.
KrausSet random_trace_preserving_channel(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

// G G† / Tr(G G†) for complex Ginibre G; full rank almost surely.
Eigen::MatrixXcd random_density_matrix(Eigen::Index n, std::uint64_t seed);

// Projectors onto k groups of columns of a Haar unitary (group sizes as
// equal as possible); a complete orthogonal family by construction.
ProjectorSet random_projector_set(Eigen::Index n, Eigen::Index k, std::uint64_t seed);

}  // namespace dsq
