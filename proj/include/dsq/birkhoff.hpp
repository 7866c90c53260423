#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dsq/simplex.hpp"

namespace dsq {

// Convex combination sum_i a_i P_i of permutation matrices. A permutation
// is stored as the index vector sigma with P[sigma[j], j] = 1: column j
// (source state j) carries its weight to row sigma[j].
struct BirkhoffDecomposition {
  std::vector<double> weights;
  std::vector<std::vector<Eigen::Index>> permutations;

  Eigen::Index terms() const { return static_cast<Eigen::Index>(weights.size()); }
};

// Dense matrix of the permutation sigma; rejects index vectors that are not
// bijections of 0..n-1.
Eigen::MatrixXd permutation_matrix(const std::vector<Eigen::Index>& sigma);

// Greedy peeling: repeatedly find a perfect matching on the support of the
// residual (entries > tol), subtract the smallest matched entry times that
// permutation, and stop once every residual entry is <= tol. Each peel
// zeroes at least one entry, so at most n^2 - 2n + 2 terms appear; failure
// to match means the input was not doubly stochastic to within tol.
BirkhoffDecomposition birkhoff_decompose(const StochasticMatrix& m, double tol = 1e-12);

// sum_i a_i P_i, validated; a convex combination of permutations is always
// doubly stochastic.
StochasticMatrix recompose(const BirkhoffDecomposition& d, double tol = kPropertyTol);

}  // namespace dsq
