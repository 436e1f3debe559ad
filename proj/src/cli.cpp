#include "blepi/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "blepi/errors.hpp"
#include "blepi/json_io.hpp"
#include "blepi/verifier.hpp"
#include "blepi/version.hpp"

namespace blepi::cli {

namespace {

using io::ordered_json;

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string command_name(Command command) {
  switch (command) {
    case Command::Validate: return "validate";
    case Command::Solve: return "solve";
    case Command::VerifyGaussian: return "verify-gaussian";
    case Command::VerifySampled: return "verify-sampled";
    case Command::Lemma1: return "lemma1";
    case Command::Audit: return "audit";
  }
  return "?";
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot open file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("cannot parse " + path + ": " + e.what());
  }
  return j;
}

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::endl;
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text << "\n";
  return out.good();
}

ordered_json envelope(const RunConfig& config) {
  ordered_json j;
  j["artifact"] = kArtifactName;
  j["version"] = kVersion;
  j["command"] = command_name(config.command);
  j["seed"] = config.seed;
  if (config.emit_timestamp) j["timestamp"] = iso8601_now();
  return j;
}

// Builds the transport map for lemma1/audit: a blockwise product of either
// monotone 1-D maps (--targets) or linear Gaussian maps (--sigmas).
TransportMap build_map(const RunConfig& config, const BLDatum& datum) {
  if (!config.targets_path.empty()) {
    const auto targets =
        io::targets_from_json(load_json_file(config.targets_path));
    if (static_cast<int>(targets.size()) != datum.k()) {
      throw ParameterError("expected one target per block");
    }
    std::vector<TransportMap> components;
    components.reserve(targets.size());
    for (size_t i = 0; i < targets.size(); ++i) {
      if (datum.r[i] != 1) {
        throw ParameterError("1-D targets require scalar blocks (r_i = 1)");
      }
      components.push_back(monotone_1d_map(targets[i]));
    }
    return product_map(std::move(components), datum.r);
  }
  if (!config.sigmas_inline.empty()) {
    const auto sigmas = io::sigmas_from_string(config.sigmas_inline);
    if (static_cast<int>(sigmas.size()) != datum.k()) {
      throw ParameterError("expected one covariance per block");
    }
    std::vector<TransportMap> components;
    components.reserve(sigmas.size());
    for (const auto& Sigma : sigmas) {
      components.push_back(gaussian_brenier(Sigma));
    }
    return product_map(std::move(components), datum.r);
  }
  throw ParameterError("lemma1/audit need --targets or --sigmas");
}

double resolve_mg(const RunConfig& config, const BLDatum& datum) {
  if (config.mg) return *config.mg;
  MgResult solved = solve_mg(datum, config.solver);
  if (solved.status != SolveStatus::Converged) {
    throw NumericalDomainError(
        "--mg omitted and the solver did not converge to a finite constant");
  }
  return solved.value;
}

int finish(const RunConfig& config, ordered_json report, bool passed) {
  report["passed"] = passed;
  if (!write_text(config.out_path, report.dump(2))) {
    std::cerr << "error: cannot write " << config.out_path << "\n";
    return 2;
  }
  return passed ? 0 : 1;
}

int dispatch(const RunConfig& config) {
  const BLDatum datum = io::datum_from_json(load_json_file(config.datum_path));

  if (config.dump_datum) {
    if (!write_text(config.out_path, io::datum_to_json(datum).dump(2))) {
      std::cerr << "error: cannot write " << config.out_path << "\n";
      return 2;
    }
    return 0;
  }

  VerifierOptions vopts;
  vopts.jitter = config.jitter;
  vopts.strata = config.strata;

  ordered_json report = envelope(config);

  switch (config.command) {
    case Command::Validate: {
      const ValidationReport validation =
          validate_datum(datum, config.rank_tol);
      report["validation"] = io::validation_to_json(validation);
      return finish(config, std::move(report), validation.ok);
    }
    case Command::Solve: {
      SolverOptions opts = config.solver;
      opts.seed = config.seed;
      const MgResult result = solve_mg(datum, opts);
      report["result"] = io::mg_result_to_json(result);
      if (!config.trace_csv_path.empty()) {
        if (!emit_trace_csv(result, config.trace_csv_path)) {
          std::cerr << "error: cannot write " << config.trace_csv_path << "\n";
          return 2;
        }
      }
      return finish(config, std::move(report),
                    result.status != SolveStatus::MaxIterations);
    }
    case Command::VerifyGaussian: {
      const auto sigmas = io::sigmas_from_string(config.sigmas_inline);
      const double mg = resolve_mg(config, datum);
      const TheoremReport theorem = theorem_gap_gaussian(datum, sigmas, mg);
      report["theorem"] = io::theorem_report_to_json(theorem);
      return finish(config, std::move(report), theorem.passed);
    }
    case Command::VerifySampled: {
      const auto targets =
          io::targets_from_json(load_json_file(config.targets_path));
      const double mg = resolve_mg(config, datum);
      const TheoremReport theorem = theorem_check_sampled(
          datum, targets, config.samples, config.seed, mg, vopts);
      report["theorem"] = io::theorem_report_to_json(theorem);
      return finish(config, std::move(report), theorem.passed);
    }
    case Command::Lemma1: {
      if (config.map_index < 0 || config.map_index >= datum.m()) {
        throw ParameterError("--map-index out of range");
      }
      const TransportMap map = build_map(config, datum);
      const LemmaReport lemma =
          lemma1_check(datum.maps[config.map_index], map, config.samples,
                       config.seed, vopts);
      report["lemma1"] = io::lemma_report_to_json(lemma);
      return finish(config, std::move(report), lemma.passed);
    }
    case Command::Audit: {
      if (config.map_index < 0 || config.map_index >= datum.m()) {
        throw ParameterError("--map-index out of range");
      }
      const TransportMap map = build_map(config, datum);
      const ProofChainAudit audit =
          proof_chain_audit(datum.maps[config.map_index], map, config.samples,
                            config.seed, vopts);
      report["audit"] = io::audit_to_json(audit);
      return finish(config, std::move(report),
                    audit.ab_ok && audit.det_ineq_nonneg);
    }
  }
  return 2;
}

}  // namespace

bool emit_trace_csv(const MgResult& result, const std::string& path) {
  if (result.trace.empty()) {
    throw ParameterError("emit_trace_csv: empty trace");
  }
  std::ofstream out(path);
  if (!out) return false;
  out << "iteration,objective,stationarity\n";
  char buf[128];
  for (const auto& point : result.trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", point.iteration,
                  point.objective, point.stationarity);
    out << buf;
  }
  return out.good();
}

int run(const RunConfig& config) {
  try {
    return dispatch(config);
  } catch (const ParameterError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int main_cli(int argc, const char* const* argv) {
  CLI::App app{"Gaussian-optimal constants and transport-based verification "
               "for entropic Brascamp-Lieb / entropy-power inequalities"};
  app.require_subcommand(1);

  RunConfig config;
  double mg_value = 0.0;

  auto add_common = [&](CLI::App* cmd, bool needs_datum = true) {
    auto* opt = cmd->add_option("--datum", config.datum_path,
                                "datum JSON file");
    if (needs_datum) opt->required();
    cmd->add_option("--out", config.out_path, "report path (default stdout)");
    cmd->add_option("--seed", config.seed, "RNG seed (echoed into reports)");
    cmd->add_flag("--dump-datum", config.dump_datum,
                  "emit the parsed datum JSON and exit");
    cmd->add_flag("--jitter", config.jitter,
                  "deterministic 1e-10 jitter before k-NN estimation");
  };

  auto* validate = app.add_subcommand("validate", "check a datum file");
  add_common(validate);
  validate->add_option("--rank-tol", config.rank_tol,
                       "relative singular value cutoff");

  auto* solve = app.add_subcommand("solve", "compute the constant M_g");
  add_common(solve);
  solve->add_option("--max-iters", config.solver.max_iters, "iteration cap");
  solve->add_option("--restarts", config.solver.restarts, "random restarts");
  solve->add_option("--stat-tol", config.solver.stat_tol,
                    "stationarity tolerance");
  solve->add_option("--trace-csv", config.trace_csv_path,
                    "write the iteration trace as CSV");

  auto* verify_gaussian =
      app.add_subcommand("verify-gaussian", "closed-form Gaussian gap");
  add_common(verify_gaussian);
  verify_gaussian
      ->add_option("--sigmas", config.sigmas_inline,
                   "per-block covariances, inline JSON")
      ->required();
  verify_gaussian->add_option("--mg", mg_value,
                              "constant to verify against (default: solve)");

  auto* verify_sampled =
      app.add_subcommand("verify-sampled", "Monte Carlo theorem check");
  add_common(verify_sampled);
  verify_sampled
      ->add_option("--targets", config.targets_path,
                   "per-coordinate distribution specs (JSON array)")
      ->required();
  verify_sampled->add_option("--samples", config.samples, "sample count");
  verify_sampled->add_option("--mg", mg_value,
                             "constant to verify against (default: solve)");

  auto* lemma1 = app.add_subcommand("lemma1", "transport lemma check");
  add_common(lemma1);
  lemma1->add_option("--targets", config.targets_path,
                     "per-coordinate distribution specs (JSON array)");
  lemma1->add_option("--sigmas", config.sigmas_inline,
                     "per-block covariances for a linear map");
  lemma1->add_option("--samples", config.samples, "sample count");
  lemma1->add_option("--map-index", config.map_index, "which A_j to test");

  auto* audit = app.add_subcommand("audit", "proof-chain step audit");
  add_common(audit);
  audit->add_option("--targets", config.targets_path,
                    "per-coordinate distribution specs (JSON array)");
  audit->add_option("--sigmas", config.sigmas_inline,
                    "per-block covariances for a linear map");
  audit->add_option("--samples", config.samples, "sample count");
  audit->add_option("--map-index", config.map_index, "which A_j to test");
  audit->add_option("--strata", config.strata,
                    "quantile cells for the conditional surrogate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    app.exit(e);
    return 2;
  }

  if (validate->parsed()) config.command = Command::Validate;
  if (solve->parsed()) config.command = Command::Solve;
  if (verify_gaussian->parsed()) config.command = Command::VerifyGaussian;
  if (verify_sampled->parsed()) config.command = Command::VerifySampled;
  if (lemma1->parsed()) config.command = Command::Lemma1;
  if (audit->parsed()) config.command = Command::Audit;

  for (auto* cmd : {verify_gaussian, verify_sampled}) {
    if (cmd->parsed() && cmd->count("--mg") > 0) {
      config.mg = mg_value;
    }
  }
  config.solver.seed = config.seed;

  return run(config);
}

}  // namespace blepi::cli
