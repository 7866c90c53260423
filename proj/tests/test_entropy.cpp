#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "dsq/entropy.hpp"
#include "dsq/error.hpp"
#include "dsq/kraus.hpp"
#include "dsq/simplex.hpp"

using namespace dsq;

namespace {

ProbabilityVector quarter_pair() {
  Eigen::VectorXd v(2);
  v << 0.75, 0.25;
  return ProbabilityVector(v);
}

}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("alpha parsing and labels") {
  CHECK(Alpha::parse("1").is_shannon());
  CHECK(Alpha::parse("1.0").is_shannon());
  CHECK(Alpha::parse("inf").is_infinity());
  CHECK(Alpha::parse("infinity").is_infinity());
  CHECK(Alpha::parse("2").value() == 2.0);
  CHECK(Alpha::parse("2") == Alpha::of(2.0));
  CHECK(Alpha::shannon().label() == "1");
  CHECK(Alpha::of(2.0).label() == "2");
  CHECK(Alpha::infinity().label() == "inf");
  CHECK(Alpha::of(3.5).label() == "3.5");

  CHECK_THROWS_AS(Alpha::parse("0"), Error);
  CHECK_THROWS_AS(Alpha::parse("-1"), Error);
  CHECK_THROWS_AS(Alpha::parse("abc"), Error);
  CHECK_THROWS_AS(Alpha::parse("2x"), Error);
  CHECK_THROWS_AS(Alpha::of(0.0), Error);
}

TEST_CASE("default orders") {
  const auto alphas = default_alphas();
  REQUIRE(alphas.size() == 3);
  CHECK(alphas[0].is_shannon());
  CHECK(alphas[1] == Alpha::of(2.0));
  CHECK(alphas[2].is_infinity());
}

TEST_CASE("entropies of the uniform state equal ln n for every order") {
  const ProbabilityVector u = uniform_state(4);
  for (const Alpha alpha : {Alpha::shannon(), Alpha::of(2.0), Alpha::of(5.0), Alpha::infinity()}) {
    CHECK(std::abs(renyi_entropy(u, alpha) - 1.3862943611198906) <= 1e-15);
  }
}

TEST_CASE("frozen values on the (3/4, 1/4) state") {
  const ProbabilityVector p = quarter_pair();
  CHECK(std::abs(renyi_entropy(p, Alpha::shannon()) - 0.5623351446188083) <= 1e-15);
  CHECK(std::abs(renyi_entropy(p, Alpha::of(2.0)) - 0.4700036292457356) <= 1e-15);
  CHECK(std::abs(renyi_entropy(p, Alpha::infinity()) - 0.2876820724517809) <= 1e-15);
  CHECK(std::abs(renyi_entropy(p, Alpha::of(0.5)) - 0.6238107163648713) <= 1e-15);
}

TEST_CASE("basis states have zero entropy and zeros are skipped") {
  const ProbabilityVector e0 = ProbabilityVector::basis(5, 0);
  CHECK(renyi_entropy(e0, Alpha::shannon()) == 0.0);
  CHECK(renyi_entropy(e0, Alpha::of(2.0)) == 0.0);
  CHECK(renyi_entropy(e0, Alpha::infinity()) == 0.0);

  Eigen::VectorXd v(3);
  v << 0.5, 0.5, 0.0;
  CHECK(std::abs(renyi_entropy(ProbabilityVector(v), Alpha::shannon()) -
                 0.6931471805599453) <= 1e-15);
}

TEST_CASE("renyi entropy is non-increasing in the order") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const ProbabilityVector p(random_simplex_point(5, rng));
    double last = renyi_entropy(p, Alpha::of(0.5));
    for (const Alpha alpha :
         {Alpha::shannon(), Alpha::of(2.0), Alpha::of(4.0), Alpha::infinity()}) {
      const double h = renyi_entropy(p, alpha);
      CHECK(h <= last + 1e-12);
      last = h;
    }
  }
}

TEST_CASE("density spectrum validates and sorts") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 0.25;
  rho(1, 1) = 0.75;
  const Eigen::VectorXd spec = density_spectrum(rho);
  CHECK(spec(0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(spec(1) == doctest::Approx(0.25).epsilon(1e-14));

  Eigen::MatrixXcd not_hermitian = rho;
  not_hermitian(0, 1) = std::complex<double>(0.0, 0.3);
  CHECK_THROWS_AS(density_spectrum(not_hermitian), Error);

  Eigen::MatrixXcd bad_trace = 2.0 * rho;
  CHECK_THROWS_AS(density_spectrum(bad_trace), Error);

  Eigen::MatrixXcd indefinite = Eigen::MatrixXcd::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(density_spectrum(indefinite), Error);
}

TEST_CASE("quantum entropy matches the classical one on diagonal states") {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 0.75;
  rho(1, 1) = 0.25;
  const ProbabilityVector p = quarter_pair();
  for (const Alpha alpha : {Alpha::shannon(), Alpha::of(2.0), Alpha::infinity()}) {
    CHECK(std::abs(quantum_renyi_entropy(rho, alpha) - renyi_entropy(p, alpha)) <= 1e-12);
  }
}

TEST_CASE("quantum entropy is unitarily invariant") {
  const Eigen::MatrixXcd rho = random_density_matrix(4, 11);
  const Eigen::MatrixXcd u = random_unitary(4, 12);
  const Eigen::MatrixXcd rotated = u * rho * u.adjoint();
  for (const Alpha alpha : {Alpha::shannon(), Alpha::of(2.0), Alpha::infinity()}) {
    CHECK(std::abs(quantum_renyi_entropy(rotated, alpha) - quantum_renyi_entropy(rho, alpha)) <=
          1e-10);
  }
}

TEST_CASE("majorization order") {
  Eigen::VectorXd top(2), mid(2);
  top << 1.0, 0.0;
  mid << 0.7, 0.3;
  CHECK(majorization_check(ProbabilityVector(top), ProbabilityVector(mid)));
  CHECK_FALSE(majorization_check(ProbabilityVector(mid), ProbabilityVector(top)));
  CHECK(majorization_check(ProbabilityVector(mid), ProbabilityVector(mid)));

  // Images under doubly stochastic matrices are majorized by their source.
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StochasticMatrix m = sample_ds(4, static_cast<DsSampler>(seed % 3), seed);
    const ProbabilityVector p(random_simplex_point(4, rng));
    CHECK(majorization_check(p, apply(m, p)));
  }

  CHECK_THROWS_AS(majorization_check(ProbabilityVector(top), uniform_state(3)), Error);
}

TEST_CASE("monotonicity report on doubly stochastic matrices") {
  const StochasticMatrix m = sample_ds(4, DsSampler::Sinkhorn, 5);
  Rng rng(6);
  const ProbabilityVector p0(random_simplex_point(4, rng));
  const std::vector<Alpha> alphas = {Alpha::shannon(), Alpha::of(2.0), Alpha::infinity()};

  const MonotonicityReport report = check_monotone(m, p0, alphas, 30);
  CHECK(report.steps == 30);
  CHECK(report.entropies.rows() == 31);
  CHECK(report.entropies.cols() == 3);
  CHECK(report.min_delta >= -1e-12);
  CHECK_FALSE(report.witness.has_value());
  CHECK(std::abs(report.entropies(0, 0) - renyi_entropy(p0, Alpha::shannon())) <= 1e-15);

  CHECK_THROWS_AS(check_monotone(m, p0, alphas, 0), Error);
  CHECK_THROWS_AS(check_monotone(m, p0, {Alpha::of(0.5)}, 5), Error);
}

TEST_CASE("a column-stochastic collapse loses entropy at the uniform witness") {
  Eigen::MatrixXd collapse(2, 2);
  collapse << 1.0, 1.0, 0.0, 0.0;
  const StochasticMatrix m = validate(collapse);

  const auto witness = entropy_violation_witness(m);
  REQUIRE(witness.has_value());
  CHECK((*witness)[0] == 0.5);

  const MonotonicityReport report =
      check_monotone(m, uniform_state(2), {Alpha::shannon()}, 1);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->step == 0);
  CHECK(report.min_delta == -0.6931471805599453);
}

TEST_CASE("no witness for doubly stochastic matrices") {
  CHECK_FALSE(entropy_violation_witness(sample_ds(5, DsSampler::PermutationMixture, 3)).has_value());
  CHECK(entropy_violation_witness(sample_stochastic(5, 3)).has_value());
}

}  // TEST_SUITE
