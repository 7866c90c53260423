#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dsq/simplex.hpp"

namespace dsq {

// Entropy order. The limits alpha = 1 (Shannon) and alpha = infinity
// (min-entropy) are tagged exactly rather than approximated by nearby
// floating-point orders.
class Alpha {
 public:
  static Alpha shannon() { return Alpha(Tag::Shannon, 1.0); }
  static Alpha infinity() { return Alpha(Tag::Infinity, std::numeric_limits<double>::infinity()); }

  // Finite order > 0; of(1.0) collapses to the tagged Shannon limit.
  static Alpha of(double value);

  // Accepts "inf", "infinity", or a positive decimal order.
  static Alpha parse(const std::string& text);

  bool is_shannon() const { return tag_ == Tag::Shannon; }
  bool is_infinity() const { return tag_ == Tag::Infinity; }
  double value() const { return value_; }
  std::string label() const;

  bool operator==(const Alpha& other) const {
    return tag_ == other.tag_ && (tag_ != Tag::Finite || value_ == other.value_);
  }

 private:
  enum class Tag { Finite, Shannon, Infinity };
  Alpha(Tag tag, double value) : tag_(tag), value_(value) {}

  Tag tag_;
  double value_;
};

// The default orders reported throughout the toolkit.
std::vector<Alpha> default_alphas();

// H_alpha(p) = ln(sum_i p_i^alpha) / (1 - alpha), with the Shannon and
// min-entropy limits at the tagged orders. Zero entries contribute nothing
// (0^alpha := 0 and 0 ln 0 := 0).
double renyi_entropy(const ProbabilityVector& p, Alpha alpha);

// Same map on the spectrum of a density matrix: (1/(1-alpha)) ln Tr rho^alpha.
double quantum_renyi_entropy(const Eigen::MatrixXcd& rho, Alpha alpha, double tol = kPropertyTol);

// Validates Hermiticity, unit trace, and positivity, then returns the
// eigenvalues clamped at zero, in descending order.
Eigen::VectorXd density_spectrum(const Eigen::MatrixXcd& rho, double tol = kPropertyTol);

// True iff p majorizes q: every partial sum of the descending rearrangement
// of p dominates the corresponding partial sum of q. For doubly stochastic
// M, p always majorizes Mp, which forces every H_alpha to be monotone.
bool majorization_check(const ProbabilityVector& p, const ProbabilityVector& q,
                        double tol = kPropertyTol);

struct MonotonicityReport {
  struct Witness {
    int step;
    ProbabilityVector state;  // the point whose image lost entropy
  };

  std::vector<Alpha> alphas;
  int steps = 0;
  Eigen::MatrixXd entropies;  // (steps+1) x |alphas|, row k holds H_alpha(M^k p0)
  double min_delta = 0.0;     // smallest H(next) - H(current) over all alphas
  std::optional<Witness> witness;
};

// Iterates p <- Mp for `steps` applications and records the entropy table.
// Orders below 1 are rejected: the monotonicity statement covers alpha >= 1
// and the infinity limit only.
MonotonicityReport check_monotone(const StochasticMatrix& m, const ProbabilityVector& p0,
                                  const std::vector<Alpha>& alphas, int steps,
                                  double tol = kPropertyTol);

// Returns the uniform state when M moves it (then every H_alpha with
// alpha >= 1 strictly decreases there, since uniform is the unique
// maximizer); empty when M is doubly stochastic.
std::optional<ProbabilityVector> entropy_violation_witness(const StochasticMatrix& m,
                                                           double tol = kIngestTol);

}  // namespace dsq
