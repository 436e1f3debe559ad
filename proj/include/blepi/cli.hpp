#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "blepi/solver.hpp"

// Command-line front end. Exit status: 0 on pass, 1 on inequality violation
// or solver failure, 2 on input error.

namespace blepi::cli {

enum class Command { Validate, Solve, VerifyGaussian, VerifySampled, Lemma1,
                     Audit };

struct RunConfig {
  Command command = Command::Validate;
  std::string datum_path;
  std::string out_path;       // empty = stdout
  std::string sigmas_inline;  // per-block covariances, inline JSON
  std::string targets_path;   // per-coordinate 1-D distribution specs
  std::string trace_csv_path;
  int samples = 20000;
  std::uint64_t seed = 0;
  std::optional<double> mg;   // supplied constant; otherwise solved for
  int map_index = 0;          // which A_j drives lemma1/audit
  int strata = 8;
  bool dump_datum = false;
  bool jitter = false;
  double rank_tol = 1e-10;
  SolverOptions solver;
  // Reports normally carry a timestamp; tests turn it off to compare bytes.
  bool emit_timestamp = true;
};

int run(const RunConfig& config);

// Writes `iteration,objective,stationarity` rows in full double precision.
// Throws ParameterError on an empty trace; returns false if unwritable.
bool emit_trace_csv(const MgResult& result, const std::string& path);

int main_cli(int argc, const char* const* argv);

}  // namespace blepi::cli
