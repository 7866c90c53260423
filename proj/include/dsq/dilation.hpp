#pragma once

#include <Eigen/Dense>

#include "dsq/kraus.hpp"

namespace dsq {

// Residual allowed on the assembled unitary and on the reductions below.
inline constexpr double kDilationTol = 1e-9;

// Which way the deterministic orthonormal completion walks the standard
// basis. The reduction must not depend on this choice; exposing it makes
// that independence testable.
enum class CompletionOrder { Forward, Reversed };

// Unitary on system (+) bath with bath dimension exactly 2N, realized on
// C^{2nN} with index (sigma*N + alpha)*n + i: sigma picks the bath copy,
// alpha the Kraus slot, i the system coordinate. bath_state is the uniform
// superposition over the (alpha, sigma=+) slots.
struct UnitaryDilation {
  Eigen::MatrixXcd u;
  Eigen::Index n = 0;
  Eigen::Index kraus_count = 0;
  Eigen::VectorXcd bath_state;
};

// Embeds a bistochastic Kraus set into a unitary. On the diagonal subspace
// of the + copy, U(v + ... + v + 0...) = sqrt(N)(A_1 v + ... + A_N v + 0...);
// the orthocomplements of the two copies are wired across (+ complement into
// the - copy and vice versa) through a deterministically completed isometry.
UnitaryDilation dilate(const KrausSet& k, CompletionOrder order = CompletionOrder::Forward);

// System-bath reduction with the distinguished initial bath state:
// M_ij = sum over final bath basis b of |<i,b|U|j,bath>|^2. Recovers the
// Kraus descent sum_alpha |<i|A_alpha|j>|^2 of the originating set.
StochasticMatrix reduce_dilation(const UnitaryDilation& d, double tol = kDilationTol);

// The (1/2N) sum_{alpha,sigma} |<i,alpha,sigma|U|j,alpha,sigma>|^2 average,
// evaluated verbatim and returned without being asserted against the
// reduction; for this construction it comes out as M/N^2 (equal to M only
// at N = 1), and callers report the ratio instead of hiding it.
Eigen::MatrixXd paper_reconstruction(const UnitaryDilation& d);

}  // namespace dsq
