// Command-line front end: validation, conversions, dilation, decomposition,
// entropy sweeps, and the Poisson-clocked simulator, all file-based and
// deterministic per seed. Exit codes: 0 ok, 2 rejected input, 3 failed
// computation.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dsq/birkhoff.hpp"
#include "dsq/dilation.hpp"
#include "dsq/entropy.hpp"
#include "dsq/error.hpp"
#include "dsq/io.hpp"
#include "dsq/kraus.hpp"
#include "dsq/process.hpp"
#include "dsq/simplex.hpp"

namespace {

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string fmt3(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

std::vector<dsq::Alpha> parse_alphas(const std::string& list) {
  std::vector<dsq::Alpha> alphas;
  std::istringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (!token.empty()) alphas.push_back(dsq::Alpha::parse(token));
  }
  if (alphas.empty()) dsq::fail(dsq::ErrorCode::BadFlag, "--alphas needs at least one order");
  return alphas;
}

std::vector<Eigen::Index> parse_indices(const std::string& list) {
  std::vector<Eigen::Index> indices;
  std::istringstream in(list);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    try {
      indices.push_back(static_cast<Eigen::Index>(std::stoll(token)));
    } catch (const std::exception&) {
      dsq::fail(dsq::ErrorCode::BadFlag, "cannot parse index '" + token + "'");
    }
  }
  return indices;
}

dsq::StochasticMatrix load_matrix(const std::string& path, double tol) {
  return dsq::validate(dsq::io::matrix_from_json(dsq::io::load_json(path)), tol);
}

// Payload goes to --out when given, otherwise to stdout; the summary line is
// printed only when the payload went to a file.
void emit(const std::string& out_path, const dsq::io::json& payload, const std::string& summary) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << '\n';
  } else {
    dsq::io::save_json(out_path, payload);
    std::cout << summary << '\n';
  }
}

const char* kind_name(const dsq::StochasticMatrix& m) {
  return m.doubly_stochastic() ? "doubly stochastic" : "column stochastic";
}

// Column-stochastic sample that visibly moves the uniform state, so the
// entropy decrease at the witness is first order, not lost in rounding.
dsq::StochasticMatrix sample_clearly_non_ds(Eigen::Index n, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    dsq::StochasticMatrix m =
        dsq::sample_stochastic(n, dsq::derive_subseed(seed, attempt));
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    if (((m.entries() * u - u).cwiseAbs().maxCoeff()) > 1e-3) return m;
  }
}

struct CommonFlags {
  std::string out;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string alphas = "1,2,inf";
};

void add_simulate(CLI::App& app, const char* name, const char* help, bool ensemble_mode) {
  auto* cmd = app.add_subcommand(name, help);
  auto config_path = std::make_shared<std::string>();
  auto out_path = std::make_shared<std::string>();
  auto seed = std::make_shared<std::uint64_t>(0);
  auto trajectories = std::make_shared<Eigen::Index>(100);
  auto threads = std::make_shared<int>(1);
  cmd->add_option("--config", *config_path, "process configuration document")->required();
  cmd->add_option("--out", *out_path, "write the table here instead of stdout");
  auto* seed_opt = cmd->add_option("--seed", *seed, "override the seed in the configuration");
  if (ensemble_mode) {
    cmd->add_option("--trajectories", *trajectories, "number of trajectories (default 100)");
    cmd->add_option("--threads", *threads, "worker threads (default 1)");
  }
  cmd->callback([=]() {
    dsq::ProcessConfig cfg = dsq::io::config_from_json(dsq::io::load_json(*config_path));
    if (seed_opt->count() > 0) cfg.seed = *seed;
    std::ostringstream table;
    std::string summary;
    if (ensemble_mode) {
      const dsq::EnsembleReport report = dsq::run_ensemble(cfg, *trajectories, *threads);
      dsq::io::write_ensemble_csv(table, report);
      summary = "steps=" + std::to_string(report.times.size()) +
                " trajectories=" + std::to_string(report.trajectory_count) +
                " final_l1_dist=" + fmt3(report.distances.back()) +
                " bound=" + fmt3(report.dobrushin_bounds.back());
    } else {
      const dsq::TrajectoryRecord record = dsq::run_trajectory(cfg);
      dsq::io::write_trajectory_csv(table, record);
      summary = "steps=" + std::to_string(record.times.size()) + " final_state=" +
                std::to_string(record.states.empty() ? record.initial_state
                                                     : record.states.back());
    }
    if (out_path->empty()) {
      std::cout << table.str();
    } else {
      dsq::io::save_text(*out_path, table.str());
      std::cout << summary << '\n';
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"doubly stochastic descent of quantum channels: conversions, "
               "dilation, decomposition, entropy checks, and simulation"};
  app.require_subcommand(1);

  try {
    // validate
    {
      auto* cmd = app.add_subcommand("validate", "check a matrix document and classify it");
      auto path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--matrix", *path, "matrix document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the validated matrix here");
      cmd->callback([=]() {
        const dsq::StochasticMatrix m = load_matrix(*path, flags->tol);
        const std::string summary =
            "n=" + std::to_string(m.dim()) + " " + kind_name(m);
        if (!flags->out.empty()) dsq::io::save_json(flags->out, dsq::io::matrix_to_json(m.entries()));
        std::cout << summary << '\n';
      });
    }

    // uniform
    {
      auto* cmd = app.add_subcommand("uniform", "emit the uniform state");
      auto n = std::make_shared<Eigen::Index>(0);
      auto out = std::make_shared<std::string>();
      cmd->add_option("--n", *n, "dimension")->required();
      cmd->add_option("--out", *out, "write the state here instead of stdout");
      cmd->callback([=]() {
        emit(*out, dsq::io::probability_to_json(dsq::uniform_state(*n)),
             "uniform state n=" + std::to_string(*n));
      });
    }

    // apply
    {
      auto* cmd = app.add_subcommand("apply", "apply a stochastic matrix to a state");
      auto matrix_path = std::make_shared<std::string>();
      auto state_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--matrix", *matrix_path, "matrix document")->required();
      cmd->add_option("--state", *state_path, "probability vector document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the image here instead of stdout");
      cmd->callback([=]() {
        const dsq::StochasticMatrix m = load_matrix(*matrix_path, flags->tol);
        const dsq::ProbabilityVector p =
            dsq::io::probability_from_json(dsq::io::load_json(*state_path));
        emit(flags->out, dsq::io::probability_to_json(dsq::apply(m, p)), "applied");
      });
    }

    // entropy
    {
      auto* cmd = app.add_subcommand("entropy", "entropies of a state");
      auto state_path = std::make_shared<std::string>();
      auto alphas = std::make_shared<std::string>("1,2,inf");
      cmd->add_option("--state", *state_path, "probability vector document")->required();
      cmd->add_option("--alphas", *alphas, "orders, comma separated (default 1,2,inf)");
      cmd->callback([=]() {
        const dsq::ProbabilityVector p =
            dsq::io::probability_from_json(dsq::io::load_json(*state_path));
        for (const dsq::Alpha& alpha : parse_alphas(*alphas)) {
          std::cout << "H_" << alpha.label() << " = " << fmt(dsq::renyi_entropy(p, alpha))
                    << '\n';
        }
      });
    }

    // theorem-check
    {
      auto* cmd = app.add_subcommand(
          "theorem-check", "entropy never decreases under sampled doubly stochastic matrices");
      auto seeds = std::make_shared<Eigen::Index>(0);
      auto n = std::make_shared<Eigen::Index>(0);
      auto steps = std::make_shared<int>(50);
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--seeds", *seeds, "number of sampled matrices")->required();
      cmd->add_option("--n", *n, "dimension")->required();
      cmd->add_option("--steps", *steps, "applications per matrix (default 50)");
      cmd->add_option("--seed", flags->seed, "base seed (default 0)");
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--alphas", flags->alphas, "orders, comma separated (default 1,2,inf)");
      cmd->callback([=]() {
        const std::vector<dsq::Alpha> alphas = parse_alphas(flags->alphas);
        double min_delta = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < *seeds; ++s) {
          const std::uint64_t sample_seed = dsq::derive_subseed(flags->seed, static_cast<std::uint64_t>(s));
          const dsq::StochasticMatrix m =
              dsq::sample_ds(*n, static_cast<dsq::DsSampler>(s % 3), sample_seed);
          dsq::Rng rng(dsq::derive_subseed(sample_seed, 0x7030u));
          const dsq::ProbabilityVector p0(dsq::random_simplex_point(*n, rng));
          const dsq::MonotonicityReport report =
              dsq::check_monotone(m, p0, alphas, *steps, flags->tol);
          min_delta = std::min(min_delta, report.min_delta);
          if (report.witness) {
            dsq::fail(dsq::ErrorCode::ComputationFailed,
                      "entropy decreased under a doubly stochastic matrix (seed index " +
                          std::to_string(s) + ", delta " + fmt3(report.min_delta) + ")");
          }
        }
        std::cout << "theorem-check: Ok, min_delta=" << fmt3(min_delta) << " over "
                  << *seeds << " matrices (n=" << *n << ", steps=" << *steps << ")\n";
      });
    }

    // converse-check
    {
      auto* cmd = app.add_subcommand(
          "converse-check", "entropy strictly decreases at uniform for non doubly stochastic matrices");
      auto seeds = std::make_shared<Eigen::Index>(0);
      auto n = std::make_shared<Eigen::Index>(0);
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--seeds", *seeds, "number of sampled matrices")->required();
      cmd->add_option("--n", *n, "dimension")->required();
      cmd->add_option("--seed", flags->seed, "base seed (default 0)");
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->callback([=]() {
        double min_decrease = std::numeric_limits<double>::infinity();
        for (Eigen::Index s = 0; s < *seeds; ++s) {
          const dsq::StochasticMatrix m = sample_clearly_non_ds(
              *n, dsq::derive_subseed(flags->seed, static_cast<std::uint64_t>(s)));
          const auto witness = dsq::entropy_violation_witness(m);
          if (!witness) {
            dsq::fail(dsq::ErrorCode::ComputationFailed,
                      "no witness for a non doubly stochastic sample (seed index " +
                          std::to_string(s) + ")");
          }
          const double decrease =
              dsq::renyi_entropy(*witness, dsq::Alpha::shannon()) -
              dsq::renyi_entropy(dsq::apply(m, *witness), dsq::Alpha::shannon());
          min_decrease = std::min(min_decrease, decrease);
          if (decrease <= 1e-8) {
            dsq::fail(dsq::ErrorCode::ComputationFailed,
                      "entropy decrease " + fmt3(decrease) + " at seed index " +
                          std::to_string(s) + " is below 1e-8");
          }
        }
        std::cout << "converse-check: Ok, min H_1 decrease " << fmt3(min_decrease)
                  << " over " << *seeds << " matrices (n=" << *n << ")\n";
      });
    }

    // kraus-to-ds
    {
      auto* cmd = app.add_subcommand("kraus-to-ds", "descend a Kraus set to its stochastic matrix");
      auto kraus_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--kraus", *kraus_path, "Kraus set document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the matrix here instead of stdout");
      cmd->callback([=]() {
        const dsq::KrausSet k =
            dsq::io::kraus_from_json(dsq::io::load_json(*kraus_path), flags->tol);
        const dsq::StochasticMatrix m = dsq::kraus_to_ds(k, flags->tol);
        emit(flags->out, dsq::io::matrix_to_json(m.entries()),
             "n=" + std::to_string(m.dim()) + " N=" + std::to_string(k.count()) + " " +
                 kind_name(m));
      });
    }

    // ds-to-kraus
    {
      auto* cmd = app.add_subcommand("ds-to-kraus", "rank-one Kraus set of a doubly stochastic matrix");
      auto matrix_path = std::make_shared<std::string>();
      auto drop_zeros = std::make_shared<bool>(false);
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--matrix", *matrix_path, "matrix document")->required();
      cmd->add_flag("--drop-zeros", *drop_zeros, "omit operators for zero entries");
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the Kraus set here instead of stdout");
      cmd->callback([=]() {
        const dsq::StochasticMatrix m = load_matrix(*matrix_path, flags->tol);
        const dsq::KrausSet k = dsq::ds_to_kraus(m, *drop_zeros);
        emit(flags->out, dsq::io::kraus_to_json(k),
             "N=" + std::to_string(k.count()) + (k.unital() ? " operators, unital"
                                                            : " operators"));
      });
    }

    // unitary-to-ds
    {
      auto* cmd = app.add_subcommand("unitary-to-ds", "unistochastic matrix of a unitary");
      auto unitary_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--unitary", *unitary_path, "complex matrix document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the matrix here instead of stdout");
      cmd->callback([=]() {
        const dsq::StochasticMatrix m = dsq::unitary_to_ds(
            dsq::io::complex_matrix_from_json(dsq::io::load_json(*unitary_path)), flags->tol);
        emit(flags->out, dsq::io::matrix_to_json(m.entries()),
             "n=" + std::to_string(m.dim()) + " " + kind_name(m));
      });
    }

    // dilate
    {
      auto* cmd = app.add_subcommand("dilate", "unitary dilation of a bistochastic Kraus set");
      auto kraus_path = std::make_shared<std::string>();
      auto order = std::make_shared<std::string>("forward");
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--kraus", *kraus_path, "Kraus set document")->required();
      cmd->add_option("--order", *order, "completion order: forward or reversed");
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the dilation here instead of stdout");
      cmd->callback([=]() {
        dsq::CompletionOrder completion;
        if (*order == "forward") {
          completion = dsq::CompletionOrder::Forward;
        } else if (*order == "reversed") {
          completion = dsq::CompletionOrder::Reversed;
        } else {
          dsq::fail(dsq::ErrorCode::BadFlag, "--order must be forward or reversed");
        }
        const dsq::KrausSet k =
            dsq::io::kraus_from_json(dsq::io::load_json(*kraus_path), flags->tol);
        const dsq::UnitaryDilation d = dsq::dilate(k, completion);
        const double residual =
            (d.u.adjoint() * d.u -
             Eigen::MatrixXcd::Identity(d.u.rows(), d.u.cols()))
                .cwiseAbs()
                .maxCoeff();
        emit(flags->out, dsq::io::dilation_to_json(d),
             "U is " + std::to_string(d.u.rows()) + "-dimensional, unitarity residual " +
                 fmt3(residual));
      });
    }

    // reduce
    {
      auto* cmd = app.add_subcommand("reduce", "system-bath reduction of a dilation");
      auto dilation_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      flags->tol = dsq::kDilationTol;
      cmd->add_option("--dilation", *dilation_path, "dilation document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-9)");
      cmd->add_option("--out", flags->out, "write the matrix here instead of stdout");
      cmd->callback([=]() {
        const dsq::UnitaryDilation d =
            dsq::io::dilation_from_json(dsq::io::load_json(*dilation_path));
        const dsq::StochasticMatrix m = dsq::reduce_dilation(d, flags->tol);
        emit(flags->out, dsq::io::matrix_to_json(m.entries()),
             "n=" + std::to_string(m.dim()) + " " + kind_name(m));
      });
    }

    // paper-reconstruction
    {
      auto* cmd = app.add_subcommand(
          "paper-reconstruction", "diagonal-block average of a dilation, reported verbatim");
      auto dilation_path = std::make_shared<std::string>();
      auto kraus_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--dilation", *dilation_path, "dilation document")->required();
      cmd->add_option("--kraus", *kraus_path, "compare against this set's descent");
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the average here instead of stdout");
      cmd->callback([=]() {
        const dsq::UnitaryDilation d =
            dsq::io::dilation_from_json(dsq::io::load_json(*dilation_path));
        const Eigen::MatrixXd r = dsq::paper_reconstruction(d);
        std::string summary = "N=" + std::to_string(d.kraus_count);
        if (!kraus_path->empty()) {
          const dsq::KrausSet k =
              dsq::io::kraus_from_json(dsq::io::load_json(*kraus_path), flags->tol);
          const Eigen::MatrixXd m = dsq::kraus_to_ds(k, flags->tol).entries();
          const double nn = static_cast<double>(d.kraus_count * d.kraus_count);
          summary += ", max |N^2 * average - descent| = " +
                     fmt3((nn * r - m).cwiseAbs().maxCoeff()) +
                     " (the average is descent/N^2; equal at N=1)";
        }
        emit(flags->out, dsq::io::matrix_to_json(r), summary);
        if (flags->out.empty()) std::cout << summary << '\n';
      });
    }

    // birkhoff
    {
      auto* cmd = app.add_subcommand("birkhoff", "decompose into permutation matrices");
      auto matrix_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      flags->tol = 1e-12;
      cmd->add_option("--matrix", *matrix_path, "matrix document")->required();
      cmd->add_option("--tol", flags->tol, "peel threshold (default 1e-12)");
      cmd->add_option("--out", flags->out, "write the decomposition here instead of stdout");
      cmd->callback([=]() {
        const dsq::StochasticMatrix m = load_matrix(*matrix_path, dsq::kPropertyTol);
        const dsq::BirkhoffDecomposition d = dsq::birkhoff_decompose(m, flags->tol);
        const Eigen::Index cap = m.dim() * m.dim() - 2 * m.dim() + 2;
        emit(flags->out, dsq::io::decomposition_to_json(d),
             "terms=" + std::to_string(d.terms()) + " (cap " + std::to_string(cap) + ")");
      });
    }

    // recompose
    {
      auto* cmd = app.add_subcommand("recompose", "rebuild the matrix of a decomposition");
      auto decomposition_path = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--decomposition", *decomposition_path, "decomposition document")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the matrix here instead of stdout");
      cmd->callback([=]() {
        const dsq::BirkhoffDecomposition d =
            dsq::io::decomposition_from_json(dsq::io::load_json(*decomposition_path));
        const dsq::StochasticMatrix m = dsq::recompose(d, flags->tol);
        emit(flags->out, dsq::io::matrix_to_json(m.entries()),
             "n=" + std::to_string(m.dim()) + " " + kind_name(m));
      });
    }

    add_simulate(app, "simulate", "run one seeded trajectory and emit its table", false);
    add_simulate(app, "ensemble",
                 "evolve the exact distribution next to sampled trajectories", true);

    // histories
    {
      auto* cmd = app.add_subcommand("histories", "probability of a basis-state history");
      auto matrix_paths = std::make_shared<std::vector<std::string>>();
      auto history = std::make_shared<std::string>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--matrix", *matrix_paths, "chain matrices, one flag per step")->required();
      cmd->add_option("--history", *history, "basis indices, comma separated")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->callback([=]() {
        std::vector<dsq::StochasticMatrix> chain;
        chain.reserve(matrix_paths->size());
        for (const std::string& path : *matrix_paths) chain.push_back(load_matrix(path, flags->tol));
        std::cout << fmt(dsq::history_probability(chain, parse_indices(*history))) << '\n';
      });
    }

    // contraction
    {
      auto* cmd = app.add_subcommand("contraction", "chain contraction diagnostics");
      auto matrix_paths = std::make_shared<std::vector<std::string>>();
      auto flags = std::make_shared<CommonFlags>();
      cmd->add_option("--matrix", *matrix_paths, "chain matrices, one flag per step")->required();
      cmd->add_option("--tol", flags->tol, "tolerance (default 1e-10)");
      cmd->add_option("--out", flags->out, "write the coefficients here");
      cmd->callback([=]() {
        std::vector<dsq::StochasticMatrix> chain;
        chain.reserve(matrix_paths->size());
        for (const std::string& path : *matrix_paths) chain.push_back(load_matrix(path, flags->tol));
        const dsq::ChainContraction c = dsq::chain_contraction(chain);
        const bool holds = c.product_coefficient <= c.coefficient_product + flags->tol;
        std::cout << "product_coefficient = " << fmt(c.product_coefficient) << '\n'
                  << "coefficient_product = " << fmt(c.coefficient_product) << '\n'
                  << "submultiplicative: " << (holds ? "yes" : "no") << '\n';
        if (!flags->out.empty()) {
          dsq::io::save_json(flags->out,
                             dsq::io::json{{"product_coefficient", c.product_coefficient},
                                           {"coefficient_product", c.coefficient_product}});
        }
      });
    }

    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dsq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_validation() ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
