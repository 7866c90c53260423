#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

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

TEST_SUITE("simplex") {

TEST_CASE("probability vector accepts, clamps, and normalizes") {
  Eigen::VectorXd v(3);
  v << 0.5, 0.5 + 1e-14, -1e-14;
  const ProbabilityVector p(v);
  CHECK(p.size() == 3);
  CHECK(p[2] == 0.0);
  CHECK(std::abs(p.coeffs().sum() - 1.0) <= 1e-15);
  CHECK((p.coeffs().array() >= 0.0).all());
}

TEST_CASE("probability vector rejects bad input") {
  Eigen::VectorXd negative(2);
  negative << 1.2, -0.2;
  CHECK_THROWS_AS(ProbabilityVector{negative}, Error);

  Eigen::VectorXd off_simplex(2);
  off_simplex << 0.6, 0.6;
  CHECK_THROWS_AS(ProbabilityVector{off_simplex}, Error);

  CHECK_THROWS_AS(ProbabilityVector{Eigen::VectorXd()}, Error);
}

TEST_CASE("basis state") {
  const ProbabilityVector e1 = ProbabilityVector::basis(3, 1);
  CHECK(e1[0] == 0.0);
  CHECK(e1[1] == 1.0);
  CHECK(e1[2] == 0.0);
  CHECK_THROWS_AS(ProbabilityVector::basis(3, 3), Error);
}

TEST_CASE("validate classifies by the row-sum test") {
  const StochasticMatrix ds = validate(sym2(0.9, 0.1));
  CHECK(ds.kind() == MatrixKind::DoublyStochastic);
  CHECK(ds.doubly_stochastic());
  CHECK(ds.dim() == 2);
  CHECK(ds(0, 0) == 0.9);

  Eigen::MatrixXd cs(2, 2);
  cs << 1.0, 0.4, 0.0, 0.6;
  CHECK(validate(cs).kind() == MatrixKind::ColumnStochastic);
}

TEST_CASE("validate rejects malformed matrices") {
  CHECK_THROWS_AS(validate(Eigen::MatrixXd::Ones(2, 3)), Error);
  CHECK_THROWS_AS(validate(Eigen::MatrixXd()), Error);

  Eigen::MatrixXd negative(2, 2);
  negative << 1.5, 0.5, -0.5, 0.5;
  CHECK_THROWS_AS(validate(negative), Error);

  Eigen::MatrixXd bad_sum(2, 2);
  bad_sum << 0.5, 0.5, 0.4, 0.5;
  CHECK_THROWS_AS(validate(bad_sum), Error);
  CHECK_NOTHROW(validate(bad_sum, 0.2));  // looser tolerance admits it
}

TEST_CASE("validate renormalizes columns") {
  Eigen::MatrixXd m(2, 2);
  m << 0.5 + 4e-13, 0.25, 0.5, 0.75 - 4e-13;
  const StochasticMatrix s = validate(m);
  CHECK((s.entries().colwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("uniform state and application") {
  const ProbabilityVector u = uniform_state(4);
  CHECK(u[0] == 0.25);

  Eigen::MatrixXd swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const ProbabilityVector moved = apply(validate(swap), ProbabilityVector::basis(2, 0));
  CHECK(moved[0] == 0.0);
  CHECK(moved[1] == 1.0);

  CHECK_THROWS_AS(apply(validate(swap), uniform_state(3)), Error);
}

TEST_CASE("dobrushin coefficient, frozen values") {
  CHECK(dobrushin_coefficient(validate(sym2(0.9, 0.1))) == 0.8);
  CHECK(dobrushin_coefficient(validate(Eigen::MatrixXd::Identity(3, 3))) == 1.0);
  CHECK(dobrushin_coefficient(validate(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0))) == 0.0);
}

TEST_CASE("dobrushin contracts the zero-sum subspace") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 5);
    const StochasticMatrix m = sample_ds(n, DsSampler::Sinkhorn, seed);
    const double tau = dobrushin_coefficient(m);
    Rng rng(seed + 7);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian();
    v.array() -= v.mean();
    CHECK(l1_norm(m.entries() * v) <= tau * l1_norm(v) + 1e-12);
  }
}

TEST_CASE("subdominant singular value") {
  CHECK(std::abs(subdominant_singular_value(validate(sym2(0.9, 0.1))) - 0.8) <= 1e-12);
  CHECK(subdominant_singular_value(validate(Eigen::MatrixXd::Constant(4, 4, 0.25))) <= 1e-12);
  CHECK(subdominant_singular_value(validate(Eigen::MatrixXd::Ones(1, 1))) == 0.0);
}

TEST_CASE("contraction report flags generic matrices") {
  const ContractionReport fast = contraction_report(validate(sym2(0.9, 0.1)));
  CHECK(fast.dobrushin == 0.8);
  CHECK(fast.is_generic);
  const ContractionReport stuck = contraction_report(validate(Eigen::MatrixXd::Identity(2, 2)));
  CHECK_FALSE(stuck.is_generic);
}

TEST_CASE("induced norms of a doubly stochastic matrix are at most one") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const StochasticMatrix m =
        sample_ds(3 + static_cast<Eigen::Index>(seed % 4),
                  static_cast<DsSampler>(seed % 3), seed);
    for (const double alpha : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      CHECK(induced_norm(m.entries(), alpha) <= 1.0 + 1e-10);
    }
  }
  CHECK_THROWS_AS(induced_norm(Eigen::MatrixXd::Identity(2, 2), 3.0), Error);
}

TEST_CASE("samplers are deterministic per seed and hit their class") {
  for (Eigen::Index n = 2; n <= 8; ++n) {
    for (int method = 0; method < 3; ++method) {
      const StochasticMatrix a = sample_ds(n, static_cast<DsSampler>(method), 99);
      const StochasticMatrix b = sample_ds(n, static_cast<DsSampler>(method), 99);
      CHECK((a.entries() - b.entries()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(is_doubly_stochastic(a.entries(), 1e-11));
    }
  }
  const StochasticMatrix c = sample_ds(4, DsSampler::Sinkhorn, 1);
  const StochasticMatrix d = sample_ds(4, DsSampler::Sinkhorn, 2);
  CHECK((c.entries() - d.entries()).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("column sampler leaves the doubly stochastic class") {
  int defects = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StochasticMatrix m = sample_stochastic(3, seed);
    CHECK(is_column_stochastic(m.entries(), 1e-12));
    if ((m.entries().rowwise().sum().array() - 1.0).abs().maxCoeff() > 1e-6) ++defects;
  }
  CHECK(defects == 20);
}

TEST_CASE("random permutation matrices") {
  Rng rng(5);
  const Eigen::MatrixXd p = random_permutation_matrix(5, rng);
  CHECK(is_doubly_stochastic(p));
  CHECK(((p.array() == 0.0) || (p.array() == 1.0)).all());
}

TEST_CASE("l1 helpers") {
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 1.0;
  CHECK(l1_distance(a, b) == 2.0);
  CHECK(l1_distance_to_uniform(a) == 1.0);
  CHECK(l1_norm(a) == 1.0);
}

}  // TEST_SUITE
