#include "blepi/json_io.hpp"

#include <set>

#include "blepi/errors.hpp"

namespace blepi::io {

namespace {

void require_keys(const nlohmann::json& j,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional,
                  const std::string& what) {
  if (!j.is_object()) {
    throw ParameterError(what + ": expected a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      throw ParameterError(what + ": unknown key \"" + item.key() + "\"");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw ParameterError(what + ": missing key \"" + key + "\"");
    }
  }
}

std::vector<double> number_array(const nlohmann::json& j,
                                 const std::string& what) {
  if (!j.is_array()) throw ParameterError(what + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParameterError(what + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "?";
}

const char* method_name(EntropyMethod method) {
  switch (method) {
    case EntropyMethod::GaussianClosedForm: return "gaussian_closed_form";
    case EntropyMethod::PlugIn: return "plugin";
    case EntropyMethod::KNN: return "knn";
  }
  return "?";
}

}  // namespace

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParameterError("matrix: expected a non-empty 2-D array");
  }
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Eigen::MatrixXd M(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParameterError("matrix: ragged rows");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParameterError("matrix: expected numbers");
      M(r, c) = j[r][c].get<double>();
    }
  }
  return M;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& M) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

BLDatum datum_from_json(const nlohmann::json& j) {
  require_keys(j, {"r", "c", "d", "maps"}, {}, "datum");
  BLDatum datum;
  for (const auto& v : j.at("r")) {
    if (!v.is_number_integer()) {
      throw ParameterError("datum: r must hold integers");
    }
    datum.r.push_back(v.get<int>());
  }
  datum.c = number_array(j.at("c"), "datum.c");
  datum.d = number_array(j.at("d"), "datum.d");
  if (!j.at("maps").is_array()) {
    throw ParameterError("datum: maps must be an array");
  }
  for (const auto& mj : j.at("maps")) {
    datum.maps.push_back(matrix_from_json(mj));
  }
  validate_datum(datum);  // structural errors surface as ParameterError
  return datum;
}

ordered_json datum_to_json(const BLDatum& datum) {
  ordered_json j;
  j["r"] = datum.r;
  j["c"] = datum.c;
  j["d"] = datum.d;
  ordered_json maps = ordered_json::array();
  for (const auto& A : datum.maps) maps.push_back(matrix_to_json(A));
  j["maps"] = std::move(maps);
  return j;
}

Distribution1D distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ParameterError("distribution: missing \"kind\"");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "normal") {
    require_keys(j, {"kind", "mu", "sigma"}, {}, "normal");
    return Distribution1D::normal(j.at("mu").get<double>(),
                                  j.at("sigma").get<double>());
  }
  if (kind == "exponential") {
    require_keys(j, {"kind", "rate"}, {}, "exponential");
    return Distribution1D::exponential(j.at("rate").get<double>());
  }
  if (kind == "uniform") {
    require_keys(j, {"kind", "a", "b"}, {}, "uniform");
    return Distribution1D::uniform(j.at("a").get<double>(),
                                   j.at("b").get<double>());
  }
  if (kind == "gaussian_mixture") {
    require_keys(j, {"kind", "weights", "means", "sigmas"}, {},
                 "gaussian_mixture");
    return Distribution1D::gaussian_mixture(
        number_array(j.at("weights"), "weights"),
        number_array(j.at("means"), "means"),
        number_array(j.at("sigmas"), "sigmas"));
  }
  throw ParameterError("distribution: unsupported kind \"" + kind + "\"");
}

ordered_json distribution_to_json(const Distribution1D& dist) {
  ordered_json j;
  j["kind"] = dist.kind_name();
  switch (dist.kind()) {
    case Distribution1D::Kind::Normal:
      j["mu"] = dist.param_mu();
      j["sigma"] = dist.param_sigma();
      break;
    case Distribution1D::Kind::Exponential:
      j["rate"] = dist.param_rate();
      break;
    case Distribution1D::Kind::Uniform:
      j["a"] = dist.param_a();
      j["b"] = dist.param_b();
      break;
    case Distribution1D::Kind::GaussianMixture:
      j["weights"] = dist.params_weights();
      j["means"] = dist.params_means();
      j["sigmas"] = dist.params_sigmas();
      break;
  }
  return j;
}

std::vector<Distribution1D> targets_from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw ParameterError("targets: expected a JSON array of specs");
  }
  std::vector<Distribution1D> out;
  out.reserve(j.size());
  for (const auto& spec : j) out.push_back(distribution_from_json(spec));
  return out;
}

std::vector<Eigen::MatrixXd> sigmas_from_string(const std::string& text) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    try {
      parsed = nlohmann::json::parse("[" + text + "]");
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError(std::string("sigmas: not valid JSON: ") + e.what());
    }
  }
  if (!parsed.is_array() || parsed.empty()) {
    throw ParameterError("sigmas: expected matrices");
  }
  std::vector<Eigen::MatrixXd> out;
  if (parsed[0].is_array() && !parsed[0].empty() && parsed[0][0].is_array()) {
    for (const auto& mj : parsed) out.push_back(matrix_from_json(mj));
  } else {
    out.push_back(matrix_from_json(parsed));
  }
  return out;
}

ordered_json validation_to_json(const ValidationReport& report) {
  ordered_json j;
  j["ok"] = report.ok;
  j["balance"] = report.balance;
  j["rank_defects"] = report.rank_defects;
  j["messages"] = report.messages;
  return j;
}

ordered_json mg_result_to_json(const MgResult& result) {
  ordered_json j;
  j["status"] = status_name(result.status);
  j["value"] = result.value;
  j["stationarity"] = result.stationarity;
  ordered_json blocks = ordered_json::array();
  for (const auto& b : result.optimizer.blocks) {
    blocks.push_back(matrix_to_json(b));
  }
  j["optimizer"] = std::move(blocks);
  j["iterations"] = result.trace.empty() ? 0 : result.trace.back().iteration;
  if (!result.trace.empty()) {
    j["final_objective"] = result.trace.back().objective;
  }
  if (result.witness) {
    ordered_json w = ordered_json::array();
    for (const auto& b : result.witness->blocks) w.push_back(matrix_to_json(b));
    j["witness"] = std::move(w);
  }
  return j;
}

ordered_json entropy_to_json(const EntropyEstimate& est) {
  ordered_json j;
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["method"] = method_name(est.method);
  j["n_samples"] = est.n_samples;
  return j;
}

ordered_json lemma_report_to_json(const LemmaReport& report) {
  ordered_json j;
  j["lhs"] = entropy_to_json(report.lhs);
  j["rhs_exact_part"] = report.rhs_exact_part;
  j["rhs_expect_part"] = entropy_to_json(report.rhs_expect);
  j["slack"] = report.slack;
  j["combined_std_error"] = report.combined_std_error;
  j["passed"] = report.passed;
  j["n_samples"] = report.n_samples;
  j["seed"] = report.seed;
  return j;
}

ordered_json theorem_report_to_json(const TheoremReport& report) {
  ordered_json j;
  j["mode"] = report.mode == TheoremMode::GaussianClosedForm
                  ? "gaussian_closed_form"
                  : "sampled";
  j["lhs"] = report.lhs;
  j["lhs_std_error"] = report.lhs_std_error;
  j["mg"] = report.mg;
  j["gap"] = report.gap;
  j["gap_std_error"] = report.gap_std_error;
  j["passed"] = report.passed;
  j["block_entropies"] = report.block_entropies;
  j["block_std_errors"] = report.block_std_errors;
  j["map_entropies"] = report.map_entropies;
  j["map_std_errors"] = report.map_std_errors;
  if (report.mode == TheoremMode::Sampled) {
    j["n_samples"] = report.n_samples;
    j["seed"] = report.seed;
  }
  return j;
}

ordered_json audit_to_json(const ProofChainAudit& audit) {
  ordered_json j;
  j["lhs_entropy"] = entropy_to_json(audit.lhs_entropy);
  if (audit.conditional_skipped) {
    j["conditional_entropy"] = nullptr;
    j["conditional_note"] = "skipped: square map leaves no z' to condition on";
  } else {
    j["conditional_entropy"] = entropy_to_json(audit.conditional_entropy);
  }
  j["strata"] = audit.strata;
  j["h_z"] = audit.h_z;
  j["cov_expect"] = entropy_to_json(audit.cov_expect);
  j["logdet_r1"] = audit.logdet_r1;
  j["cov_value"] = audit.cov_value;
  j["det_ineq_slack"] = entropy_to_json(audit.det_ineq_slack);
  j["det_ineq_min"] = audit.det_ineq_min;
  j["det_ineq_nonneg"] = audit.det_ineq_nonneg;
  j["ab_slack"] = audit.ab_slack;
  j["ab_std_error"] = audit.ab_std_error;
  j["ab_ok"] = audit.ab_ok;
  j["bc_diff"] = audit.bc_diff;
  j["bc_std_error"] = audit.bc_std_error;
  j["bc_equal_within_3se"] = audit.bc_equal_within_3se;
  j["n_samples"] = audit.n_samples;
  j["seed"] = audit.seed;
  return j;
}

}  // namespace blepi::io
