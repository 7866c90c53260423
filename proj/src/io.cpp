#include "dsq/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "dsq/error.hpp"

namespace dsq::io {

namespace {

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) {
    fail(ErrorCode::InvalidArgument, std::string("missing field '") + name + "'");
  }
  return *it;
}

Eigen::Index dimension_field(const json& j, const char* name) {
  const json& value = field(j, name);
  if (!value.is_number_integer() || value.get<Eigen::Index>() < 1) {
    fail(ErrorCode::InvalidArgument, std::string("field '") + name + "' must be a positive integer");
  }
  return value.get<Eigen::Index>();
}

std::complex<double> complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    fail(ErrorCode::InvalidArgument, "complex entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

Eigen::MatrixXcd complex_matrix_from_data(const json& data, Eigen::Index rows, Eigen::Index cols,
                                          const char* what) {
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    std::ostringstream msg;
    msg << what << " must hold " << rows * cols << " complex entries";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      m(i, j) = complex_from_json(data[static_cast<std::size_t>(i * cols + j)]);
  return m;
}

json complex_matrix_data(const Eigen::MatrixXcd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  return data;
}

json alpha_to_json(const Alpha& alpha) { return alpha.label(); }

Alpha alpha_from_json(const json& j) {
  if (j.is_number()) return Alpha::of(j.get<double>());
  if (j.is_string()) return Alpha::parse(j.get<std::string>());
  fail(ErrorCode::InvalidArgument, "entropy orders must be numbers or strings");
}

const char* sampler_name(DsSampler method) {
  switch (method) {
    case DsSampler::PermutationMixture: return "permutation-mixture";
    case DsSampler::Sinkhorn: return "sinkhorn";
    case DsSampler::Unistochastic: return "unistochastic";
  }
  return "permutation-mixture";
}

DsSampler sampler_from_name(const std::string& name) {
  if (name == "permutation-mixture") return DsSampler::PermutationMixture;
  if (name == "sinkhorn") return DsSampler::Sinkhorn;
  if (name == "unistochastic") return DsSampler::Unistochastic;
  fail(ErrorCode::InvalidArgument, "unknown sampler '" + name + "'");
}

// 17 significant digits round-trip any double through strtod exactly.
std::string csv_double(double value) {
  char buffer[32];
  // + 0.0 folds negative zero into "0".
  std::snprintf(buffer, sizeof(buffer), "%.17g", value + 0.0);
  return buffer;
}

void write_csv_header(std::ostream& out, const std::vector<Alpha>& alphas) {
  out << "step,time,state";
  for (const Alpha& alpha : alphas) out << ",H_" << alpha.label();
  out << ",l1_dist_uniform,dobrushin_bound\n";
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"n", m.rows()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const Eigen::Index n = dimension_field(j, "n");
  const json& data = field(j, "data");
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != n * n) {
    std::ostringstream msg;
    msg << "data must hold " << n * n << " entries";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k)
      m(i, k) = data[static_cast<std::size_t>(i * n + k)].get<double>();
  return m;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  return json{{"n", m.rows()}, {"data", complex_matrix_data(m)}};
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  const Eigen::Index n = dimension_field(j, "n");
  return complex_matrix_from_data(field(j, "data"), n, n, "data");
}

json probability_to_json(const ProbabilityVector& p) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) entries.push_back(p[i]);
  return json{{"n", p.size()}, {"p", std::move(entries)}};
}

ProbabilityVector probability_from_json(const json& j, double tol) {
  const Eigen::Index n = dimension_field(j, "n");
  const json& entries = field(j, "p");
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != n) {
    fail(ErrorCode::InvalidArgument, "p must hold n entries");
  }
  Eigen::VectorXd p(n);
  for (Eigen::Index i = 0; i < n; ++i) p(i) = entries[static_cast<std::size_t>(i)].get<double>();
  return ProbabilityVector(std::move(p), tol);
}

json kraus_to_json(const KrausSet& k) {
  json operators = json::array();
  for (const auto& a : k.operators()) operators.push_back(complex_matrix_data(a));
  return json{{"n", k.dim()}, {"N", k.count()}, {"operators", std::move(operators)}};
}

KrausSet kraus_from_json(const json& j, double tol) {
  const Eigen::Index n = dimension_field(j, "n");
  const Eigen::Index count = dimension_field(j, "N");
  const json& operators = field(j, "operators");
  if (!operators.is_array() || static_cast<Eigen::Index>(operators.size()) != count) {
    fail(ErrorCode::InvalidArgument, "operators must hold N entries");
  }
  std::vector<Eigen::MatrixXcd> ops;
  ops.reserve(static_cast<std::size_t>(count));
  for (const json& op : operators) {
    ops.push_back(complex_matrix_from_data(op, n, n, "operator"));
  }
  return KrausSet(std::move(ops), tol);
}

json dilation_to_json(const UnitaryDilation& d) {
  json bath = json::array();
  for (Eigen::Index b = 0; b < d.bath_state.size(); ++b)
    bath.push_back(complex_to_json(d.bath_state(b)));
  return json{{"n", d.n},
              {"N", d.kraus_count},
              {"U", complex_matrix_data(d.u)},
              {"bath_state", std::move(bath)}};
}

UnitaryDilation dilation_from_json(const json& j) {
  UnitaryDilation d;
  d.n = dimension_field(j, "n");
  d.kraus_count = dimension_field(j, "N");
  const Eigen::Index dim = 2 * d.n * d.kraus_count;
  d.u = complex_matrix_from_data(field(j, "U"), dim, dim, "U");
  const json& bath = field(j, "bath_state");
  if (!bath.is_array() || static_cast<Eigen::Index>(bath.size()) != 2 * d.kraus_count) {
    fail(ErrorCode::InvalidArgument, "bath_state must hold 2N entries");
  }
  d.bath_state.resize(2 * d.kraus_count);
  for (Eigen::Index b = 0; b < d.bath_state.size(); ++b)
    d.bath_state(b) = complex_from_json(bath[static_cast<std::size_t>(b)]);
  return d;
}

json decomposition_to_json(const BirkhoffDecomposition& d) {
  json permutations = json::array();
  for (const auto& sigma : d.permutations) permutations.push_back(sigma);
  return json{{"weights", d.weights}, {"permutations", std::move(permutations)}};
}

BirkhoffDecomposition decomposition_from_json(const json& j) {
  BirkhoffDecomposition d;
  const json& weights = field(j, "weights");
  const json& permutations = field(j, "permutations");
  if (!weights.is_array() || !permutations.is_array() || weights.size() != permutations.size()) {
    fail(ErrorCode::InvalidArgument, "weights and permutations must be aligned arrays");
  }
  d.weights = weights.get<std::vector<double>>();
  for (const json& sigma : permutations) {
    d.permutations.push_back(sigma.get<std::vector<Eigen::Index>>());
  }
  return d;
}

json report_to_json(const MonotonicityReport& r) {
  json alphas = json::array();
  for (const Alpha& alpha : r.alphas) alphas.push_back(alpha_to_json(alpha));
  json table = json::array();
  for (Eigen::Index k = 0; k < r.entropies.rows(); ++k) {
    json row = json::array();
    for (Eigen::Index a = 0; a < r.entropies.cols(); ++a) row.push_back(r.entropies(k, a));
    table.push_back(std::move(row));
  }
  json out{{"alphas", std::move(alphas)},
           {"steps", r.steps},
           {"entropies", std::move(table)},
           {"min_delta", r.min_delta},
           {"witness", nullptr}};
  if (r.witness) {
    out["witness"] = json{{"step", r.witness->step},
                          {"state", probability_to_json(r.witness->state)}};
  }
  return out;
}

json config_to_json(const ProcessConfig& c) {
  json chain;
  if (c.chain.mode() == ChainSource::Mode::Fixed) {
    chain = json{{"type", "fixed"}, {"matrix", matrix_to_json(c.chain.fixed_matrix().entries())}};
  } else {
    chain = json{{"type", "sampled"}, {"method", sampler_name(c.chain.method())}};
  }
  json initial;
  if (const auto* index = std::get_if<Eigen::Index>(&c.initial_state)) {
    initial = *index;
  } else {
    initial = probability_to_json(std::get<ProbabilityVector>(c.initial_state));
  }
  json alphas = json::array();
  for (const Alpha& alpha : c.alphas) alphas.push_back(alpha_to_json(alpha));
  return json{{"n", c.n},          {"chain_source", std::move(chain)},
              {"rate", c.rate},    {"horizon", c.horizon},
              {"initial_state", std::move(initial)}, {"seed", c.seed},
              {"alphas", std::move(alphas)}};
}

ProcessConfig config_from_json(const json& j) {
  ProcessConfig cfg;
  cfg.n = dimension_field(j, "n");
  const json& chain = field(j, "chain_source");
  const std::string type = field(chain, "type").get<std::string>();
  if (type == "fixed") {
    cfg.chain = ChainSource::fixed(validate(matrix_from_json(field(chain, "matrix"))));
  } else if (type == "sampled") {
    cfg.chain = ChainSource::sampled(sampler_from_name(field(chain, "method").get<std::string>()));
  } else {
    fail(ErrorCode::InvalidArgument, "chain_source type must be 'fixed' or 'sampled'");
  }
  cfg.rate = field(j, "rate").get<double>();
  cfg.horizon = field(j, "horizon").get<double>();
  const json& initial = field(j, "initial_state");
  if (initial.is_number_integer()) {
    cfg.initial_state = initial.get<Eigen::Index>();
  } else if (initial.is_array()) {
    Eigen::VectorXd p(initial.size());
    for (Eigen::Index i = 0; i < p.size(); ++i)
      p(i) = initial[static_cast<std::size_t>(i)].get<double>();
    cfg.initial_state = ProbabilityVector(std::move(p));
  } else {
    cfg.initial_state = probability_from_json(initial);
  }
  cfg.seed = field(j, "seed").get<std::uint64_t>();
  if (const auto it = j.find("alphas"); it != j.end()) {
    cfg.alphas.clear();
    for (const json& alpha : *it) cfg.alphas.push_back(alpha_from_json(alpha));
  }
  return cfg;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::FileNotFound, path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    fail(ErrorCode::InvalidArgument, std::string("cannot parse ") + path + ": " + err.what());
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::FileNotFound, path);
  out << j.dump(2) << '\n';
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::FileNotFound, path);
  out << text;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  write_csv_header(out, record.alphas);
  const double n = static_cast<double>(record.dimension);
  out << "0,0,"  << record.initial_state;
  for (std::size_t a = 0; a < record.alphas.size(); ++a) out << ",0";
  out << ',' << csv_double(2.0 * (1.0 - 1.0 / n)) << ",1\n";
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    out << (k + 1) << ',' << csv_double(record.times[k]) << ',' << record.states[k];
    for (Eigen::Index a = 0; a < record.entropies.cols(); ++a) {
      out << ',' << csv_double(record.entropies(static_cast<Eigen::Index>(k), a));
    }
    out << ',' << csv_double(record.distances[k]) << ','
        << csv_double(record.dobrushin_bounds[k]) << '\n';
  }
}

void write_ensemble_csv(std::ostream& out, const EnsembleReport& report) {
  write_csv_header(out, report.alphas);
  for (std::size_t k = 0; k <= report.times.size(); ++k) {
    out << k << ',' << csv_double(k == 0 ? 0.0 : report.times[k - 1]) << ",-1";
    for (Eigen::Index a = 0; a < report.entropies.cols(); ++a) {
      out << ',' << csv_double(report.entropies(static_cast<Eigen::Index>(k), a));
    }
    out << ',' << csv_double(report.distances[k]) << ','
        << csv_double(report.dobrushin_bounds[k]) << '\n';
  }
}

}  // namespace dsq::io
