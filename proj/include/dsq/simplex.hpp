#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>

#include "dsq/error.hpp"
#include "dsq/rng.hpp"

namespace dsq {

// Tolerances used across the library: ingestion accepts input this far from
// exact; property assertions allow this much numerical slack.
inline constexpr double kIngestTol = 1e-12;
inline constexpr double kPropertyTol = 1e-10;

enum class MatrixKind { ColumnStochastic, DoublyStochastic };

// Point of the simplex. Entries are clamped at zero and normalized exactly
// on construction; inputs farther than `tol` from the simplex are rejected.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(Eigen::VectorXd p, double tol = kIngestTol);

  static ProbabilityVector basis(Eigen::Index n, Eigen::Index i);

  const Eigen::VectorXd& coeffs() const { return p_; }
  Eigen::Index size() const { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_(i); }

 private:
  Eigen::VectorXd p_;
};

// Nonnegative square matrix with unit column sums (the convention is
// column-stochastic: sum_i M_ij = 1, acting on column vectors from the
// left). `kind` records whether the row sums are unit as well.
class StochasticMatrix {
 public:
  const Eigen::MatrixXd& entries() const { return m_; }
  MatrixKind kind() const { return kind_; }
  Eigen::Index dim() const { return m_.rows(); }
  bool doubly_stochastic() const { return kind_ == MatrixKind::DoublyStochastic; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  friend StochasticMatrix validate(const Eigen::MatrixXd& matrix, double tol);

 private:
  StochasticMatrix(Eigen::MatrixXd m, MatrixKind kind)
      : m_(std::move(m)), kind_(kind) {}

  Eigen::MatrixXd m_;
  MatrixKind kind_;
};

// Contraction diagnostics on the zero-sum subspace {v | sum_i v_i = 0}.
// `dobrushin` is the exact l1 contraction factor; `subdominant_singular`
// the spectral (l2) one. `is_generic` means dobrushin < 1 - tol, which is
// sufficient for convergence to the uniform fixed point.
struct ContractionReport {
  double dobrushin = 0.0;
  double subdominant_singular = 0.0;
  bool is_generic = false;
};

// Checks entry signs and column sums, renormalizes columns exactly, and
// classifies the matrix by the row-sum test.
StochasticMatrix validate(const Eigen::MatrixXd& matrix, double tol = kIngestTol);

// The maximally mixed state p_i = 1/n, the fixed point of every doubly
// stochastic matrix.
ProbabilityVector uniform_state(Eigen::Index n);

// (Mp)_i = sum_j M_ij p_j.
ProbabilityVector apply(const StochasticMatrix& m, const ProbabilityVector& p);

// tau(M) = (1/2) max_{j,k} sum_i |M_ij - M_ik|. For every zero-sum v,
// ||Mv||_1 <= tau(M) ||v||_1, and tau is submultiplicative under products.
double dobrushin_coefficient(const Eigen::MatrixXd& m);
double dobrushin_coefficient(const StochasticMatrix& m);

// Largest singular value of M restricted to the zero-sum subspace, computed
// in an orthonormal basis of that subspace. Returns 0 for n = 1.
double subdominant_singular_value(const StochasticMatrix& m);

ContractionReport contraction_report(const StochasticMatrix& m, double generic_tol = 1e-6);

// Induced operator norm for alpha in {1, 2, inf}; other orders are rejected.
double induced_norm(const Eigen::MatrixXd& m, double alpha);

enum class DsSampler { PermutationMixture, Sinkhorn, Unistochastic };

// Seeded doubly stochastic sampler. PermutationMixture draws a convex
// combination of random permutations, Sinkhorn normalizes a positive random
// matrix to convergence, Unistochastic squares the moduli of a Haar unitary.
StochasticMatrix sample_ds(Eigen::Index n, DsSampler method, std::uint64_t seed);

// Seeded column-stochastic sampler with independent random simplex columns;
// almost surely not doubly stochastic for n >= 2.
StochasticMatrix sample_stochastic(Eigen::Index n, std::uint64_t seed);

// Random point of the simplex (normalized exponentials), and a random
// permutation matrix, both driven by the caller's generator.
Eigen::VectorXd random_simplex_point(Eigen::Index n, Rng& rng);
Eigen::MatrixXd random_permutation_matrix(Eigen::Index n, Rng& rng);

// --- small expression-friendly helpers -------------------------------------

template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().sum();
}

template <typename DerivedA, typename DerivedB>
double l1_distance(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).cwiseAbs().sum();
}

template <typename Derived>
double l1_distance_to_uniform(const Eigen::MatrixBase<Derived>& p) {
  const auto n = p.size();
  return (p.array() - 1.0 / static_cast<double>(n)).abs().sum();
}

template <typename Derived>
bool is_column_stochastic(const Eigen::MatrixBase<Derived>& m, double tol = kIngestTol) {
  if (m.rows() != m.cols()) return false;
  if ((m.array() < -tol).any()) return false;
  return (m.colwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_doubly_stochastic(const Eigen::MatrixBase<Derived>& m, double tol = kIngestTol) {
  return is_column_stochastic(m, tol) &&
         (m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= tol;
}

}  // namespace dsq
