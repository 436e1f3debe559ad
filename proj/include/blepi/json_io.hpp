#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "blepi/datum.hpp"
#include "blepi/distributions.hpp"
#include "blepi/solver.hpp"
#include "blepi/verifier.hpp"

// JSON schemas for CLI-facing files and reports. Parsers are strict:
// unknown keys are rejected.

namespace blepi::io {

using ordered_json = nlohmann::ordered_json;

// Datum document: {"r": [ints], "c": [numbers], "d": [numbers],
//                  "maps": [row-major 2-D arrays]}.
BLDatum datum_from_json(const nlohmann::json& j);
ordered_json datum_to_json(const BLDatum& datum);

// Distribution spec: {"kind": "normal"|"exponential"|"uniform"|
//                     "gaussian_mixture", parameters by kind}.
Distribution1D distribution_from_json(const nlohmann::json& j);
ordered_json distribution_to_json(const Distribution1D& dist);

// Targets document: a JSON array of distribution specs.
std::vector<Distribution1D> targets_from_json(const nlohmann::json& j);

// Inline covariance list: "[[1]],[[4]]" or a full JSON array of matrices.
std::vector<Eigen::MatrixXd> sigmas_from_string(const std::string& text);

ordered_json matrix_to_json(const Eigen::MatrixXd& M);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j);

ordered_json validation_to_json(const ValidationReport& report);
ordered_json mg_result_to_json(const MgResult& result);
ordered_json entropy_to_json(const EntropyEstimate& est);
ordered_json lemma_report_to_json(const LemmaReport& report);
ordered_json theorem_report_to_json(const TheoremReport& report);
ordered_json audit_to_json(const ProofChainAudit& audit);

}  // namespace blepi::io
