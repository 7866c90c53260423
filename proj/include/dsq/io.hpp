#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dsq/birkhoff.hpp"
#include "dsq/dilation.hpp"
#include "dsq/entropy.hpp"
#include "dsq/kraus.hpp"
#include "dsq/process.hpp"
#include "dsq/simplex.hpp"

// File formats. Real matrices: {"n", "data"} with row-major data; complex
// scalars are [re, im] pairs. Matrices act on column vectors from the left
// and columns sum to one (column-stochastic convention). Probability
// vectors: {"n", "p"}. Kraus sets: {"n", "N", "operators"} with row-major
// complex operators. Dilations: {"n", "N", "U", "bath_state"}.
// Decompositions: {"weights", "permutations"} where permutation sigma sends
// column j to row sigma[j]. Process configs mirror ProcessConfig fields.
namespace dsq::io {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const json& j);

json probability_to_json(const ProbabilityVector& p);
ProbabilityVector probability_from_json(const json& j, double tol = kIngestTol);

json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const json& j, double tol = kPropertyTol);

json dilation_to_json(const UnitaryDilation& d);
UnitaryDilation dilation_from_json(const json& j);

json decomposition_to_json(const BirkhoffDecomposition& d);
BirkhoffDecomposition decomposition_from_json(const json& j);

json report_to_json(const MonotonicityReport& r);

json config_to_json(const ProcessConfig& c);
ProcessConfig config_from_json(const json& j);

// Throws FileNotFound when the path cannot be opened and InvalidArgument
// on malformed content.
json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);
void save_text(const std::string& path, const std::string& text);

// Comma-separated tables with a step-0 row for the starting point. Columns:
// step, time, state, one H_<alpha> column per entropy order, l1_dist_uniform,
// dobrushin_bound. The ensemble table tracks a distribution, so its state
// column is -1. Doubles are printed with 17 significant digits and parse
// back bit-identically.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);
void write_ensemble_csv(std::ostream& out, const EnsembleReport& report);

}  // namespace dsq::io
