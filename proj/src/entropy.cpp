#include "dsq/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsq/error.hpp"

namespace dsq {

Alpha Alpha::of(double value) {
  if (!(value > 0.0)) fail(ErrorCode::InvalidArgument, "entropy order must be positive");
  if (std::isinf(value)) return infinity();
  if (value == 1.0) return shannon();
  return Alpha(Tag::Finite, value);
}

Alpha Alpha::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  std::istringstream in(text);
  double value = 0.0;
  char trailing = 0;
  if (!(in >> value) || (in >> trailing)) {
    fail(ErrorCode::InvalidArgument, "cannot parse entropy order '" + text + "'");
  }
  return of(value);
}

std::string Alpha::label() const {
  if (is_infinity()) return "inf";
  if (is_shannon()) return "1";
  std::ostringstream out;
  out << value_;
  return out.str();
}

std::vector<Alpha> default_alphas() {
  return {Alpha::shannon(), Alpha::of(2.0), Alpha::infinity()};
}

namespace {

// Entropy of a nonnegative weight profile that sums to one. Shared by the
// classical and spectral paths; zeros are skipped so 0 ln 0 reads as 0.
double spectrum_entropy(const Eigen::VectorXd& p, Alpha alpha) {
  const Eigen::Index n = p.size();
  if (alpha.is_infinity()) {
    return -std::log(p.maxCoeff());
  }
  if (alpha.is_shannon()) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
    }
    return h;
  }
  const double a = alpha.value();
  double power_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p[i] > 0.0) power_sum += std::pow(p[i], a);
  }
  return std::log(power_sum) / (1.0 - a);
}

}  // namespace

double renyi_entropy(const ProbabilityVector& p, Alpha alpha) {
  return spectrum_entropy(p.coeffs(), alpha);
}

Eigen::VectorXd density_spectrum(const Eigen::MatrixXcd& rho, double tol) {
  if (rho.rows() != rho.cols()) {
    fail(ErrorCode::NotDensityMatrix, "density matrix must be square");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    fail(ErrorCode::NotDensityMatrix, "density matrix must be Hermitian");
  }
  const std::complex<double> tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) {
    fail(ErrorCode::NotDensityMatrix, "density matrix must have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::ComputationFailed, "eigensolver did not converge");
  }
  Eigen::VectorXd eigs = solver.eigenvalues();
  if (eigs.minCoeff() < -tol) {
    fail(ErrorCode::NotDensityMatrix, "density matrix must be positive semidefinite");
  }
  eigs = eigs.cwiseMax(0.0);
  std::sort(eigs.data(), eigs.data() + eigs.size(), std::greater<double>());
  return eigs;
}

double quantum_renyi_entropy(const Eigen::MatrixXcd& rho, Alpha alpha, double tol) {
  return spectrum_entropy(density_spectrum(rho, tol), alpha);
}

bool majorization_check(const ProbabilityVector& p, const ProbabilityVector& q, double tol) {
  if (p.size() != q.size()) {
    fail(ErrorCode::DimensionMismatch, "majorization needs equal dimensions");
  }
  Eigen::VectorXd a = p.coeffs();
  Eigen::VectorXd b = q.coeffs();
  std::sort(a.data(), a.data() + a.size(), std::greater<double>());
  std::sort(b.data(), b.data() + b.size(), std::greater<double>());
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    sum_a += a[k];
    sum_b += b[k];
    if (sum_a < sum_b - tol) return false;
  }
  return true;
}

MonotonicityReport check_monotone(const StochasticMatrix& m, const ProbabilityVector& p0,
                                  const std::vector<Alpha>& alphas, int steps, double tol) {
  if (steps < 1) fail(ErrorCode::InvalidArgument, "step count must be >= 1");
  if (alphas.empty()) fail(ErrorCode::InvalidArgument, "need at least one entropy order");
  for (const Alpha& alpha : alphas) {
    if (!alpha.is_infinity() && alpha.value() < 1.0) {
      fail(ErrorCode::InvalidArgument,
           "monotonicity is only claimed for orders >= 1; got " + alpha.label());
    }
  }

  MonotonicityReport report;
  report.alphas = alphas;
  report.steps = steps;
  report.entropies.resize(steps + 1, static_cast<Eigen::Index>(alphas.size()));
  report.min_delta = std::numeric_limits<double>::infinity();

  ProbabilityVector state = p0;
  for (int k = 0; k <= steps; ++k) {
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      report.entropies(k, static_cast<Eigen::Index>(a)) = renyi_entropy(state, alphas[a]);
    }
    if (k == steps) break;
    ProbabilityVector next = apply(m, state);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double delta = renyi_entropy(next, alphas[a]) -
                           report.entropies(k, static_cast<Eigen::Index>(a));
      report.min_delta = std::min(report.min_delta, delta);
      if (delta < -tol && !report.witness) {
        report.witness = MonotonicityReport::Witness{k, state};
      }
    }
    state = std::move(next);
  }
  return report;
}

std::optional<ProbabilityVector> entropy_violation_witness(const StochasticMatrix& m,
                                                           double tol) {
  const ProbabilityVector u = uniform_state(m.dim());
  const Eigen::VectorXd image = m.entries() * u.coeffs();
  if ((image - u.coeffs()).cwiseAbs().maxCoeff() <= tol) return std::nullopt;
  return u;
}

}  // namespace dsq
