#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <set>
#include <vector>

#include "dsq/birkhoff.hpp"
#include "dsq/error.hpp"
#include "dsq/simplex.hpp"

using namespace dsq;

namespace {

Eigen::MatrixXd sym2(double diag, double off) {
  Eigen::MatrixXd m(2, 2);
  m << diag, off, off, diag;
  return m;
}

}  // namespace

TEST_SUITE("birkhoff") {

TEST_CASE("permutation matrices from index vectors") {
  const Eigen::MatrixXd id = permutation_matrix({0, 1, 2});
  CHECK((id - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd swap = permutation_matrix({1, 0});
  CHECK(swap(1, 0) == 1.0);
  CHECK(swap(0, 1) == 1.0);
  CHECK(swap(0, 0) == 0.0);

  CHECK_THROWS_AS(permutation_matrix({0, 0}), Error);
  CHECK_THROWS_AS(permutation_matrix({0, 2}), Error);
  CHECK_THROWS_AS(permutation_matrix({}), Error);
}

TEST_CASE("frozen two-state decomposition") {
  const BirkhoffDecomposition d = birkhoff_decompose(validate(sym2(0.7, 0.3)));
  REQUIRE(d.terms() == 2);
  CHECK(d.weights[0] == 0.7);
  CHECK(d.weights[1] == 0.3);
  CHECK(d.permutations[0] == std::vector<Eigen::Index>{0, 1});
  CHECK(d.permutations[1] == std::vector<Eigen::Index>{1, 0});
}

TEST_CASE("frozen flat three-state decomposition") {
  const double third = 1.0 / 3.0;
  const BirkhoffDecomposition d =
      birkhoff_decompose(validate(Eigen::MatrixXd::Constant(3, 3, third)));
  REQUIRE(d.terms() == 3);
  for (const double w : d.weights) CHECK(w == third);
  CHECK(d.permutations[0] == std::vector<Eigen::Index>{0, 1, 2});
  const std::set<std::vector<Eigen::Index>> rest(d.permutations.begin() + 1,
                                                 d.permutations.end());
  const std::set<std::vector<Eigen::Index>> cycles = {{1, 2, 0}, {2, 0, 1}};
  CHECK(rest == cycles);
}

TEST_CASE("permutations decompose into themselves") {
  Rng rng(9);
  const Eigen::MatrixXd p = random_permutation_matrix(6, rng);
  const BirkhoffDecomposition d = birkhoff_decompose(validate(p));
  REQUIRE(d.terms() == 1);
  CHECK(d.weights[0] == 1.0);
  CHECK((permutation_matrix(d.permutations[0]) - p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("round trip over the samplers") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 7);
    const StochasticMatrix m = sample_ds(n, static_cast<DsSampler>(seed % 3), seed);
    const BirkhoffDecomposition d = birkhoff_decompose(m);

    CHECK(d.terms() <= n * n - 2 * n + 2);
    double sum = 0.0;
    for (const double w : d.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-10);

    const std::set<std::vector<Eigen::Index>> distinct(d.permutations.begin(),
                                                       d.permutations.end());
    CHECK(static_cast<Eigen::Index>(distinct.size()) == d.terms());

    CHECK((recompose(d).entries() - m.entries()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("convex combinations of permutations never exceed unit norm") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StochasticMatrix m = sample_ds(5, DsSampler::PermutationMixture, seed);
    for (const double alpha : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      CHECK(induced_norm(m.entries(), alpha) <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("column-stochastic input is rejected before peeling") {
  CHECK_THROWS_AS(birkhoff_decompose(sample_stochastic(3, 1)), Error);
  CHECK_THROWS_AS(birkhoff_decompose(validate(sym2(0.7, 0.3)), 0.0), Error);
  CHECK_THROWS_AS(birkhoff_decompose(validate(sym2(0.7, 0.3)), -1.0), Error);
}

TEST_CASE("support without a perfect matching is detected") {
  // Doubly stochastic only to 1e-6; at peel tolerance 1e-12 the leftover
  // support concentrates in one row and cannot be matched.
  const double e = 1e-7;
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.5 + e, 0.5, 0.5 - e;
  const StochasticMatrix loose = validate(m, 1e-6);
  REQUIRE(loose.doubly_stochastic());
  CHECK_THROWS_AS(birkhoff_decompose(loose, 1e-12), Error);
}

TEST_CASE("recompose validates its input") {
  const BirkhoffDecomposition ok{{0.5, 0.5}, {{0, 1}, {1, 0}}};
  CHECK(recompose(ok).doubly_stochastic());
  CHECK(recompose(ok)(0, 0) == 0.5);

  CHECK_THROWS_AS(recompose({{0.5}, {{0, 1}, {1, 0}}}), Error);       // misaligned
  CHECK_THROWS_AS(recompose({{}, {}}), Error);                       // empty
  CHECK_THROWS_AS(recompose({{0.5, 0.4}, {{0, 1}, {1, 0}}}), Error);  // sum != 1
  CHECK_THROWS_AS(recompose({{1.5, -0.5}, {{0, 1}, {1, 0}}}), Error); // negative
  CHECK_THROWS_AS(recompose({{0.5, 0.5}, {{0, 1}, {1, 2}}}), Error);  // bad sigma
}

}  // TEST_SUITE
