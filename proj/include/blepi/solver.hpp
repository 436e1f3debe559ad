#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blepi/datum.hpp"
#include "blepi/objective.hpp"

// Computes M_g = sup F(B) over block-diagonal PD matrices by gradient
// ascent on per-block Cholesky factors (strictly-lower part free, diagonal
// log-parameterized), with backtracking line search and multi-start.

namespace blepi {

enum class SolveStatus { Converged, Unbounded, MaxIterations };

struct TracePoint {
  int iteration;
  double objective;
  double stationarity;
};

struct SolverOptions {
  int max_iters = 2000;
  double stat_tol = 1e-8;
  double step_init = 1.0;
  double divergence_threshold = 1e8;
  std::uint64_t seed = 0;
  int restarts = 4;  // random starts in addition to the identity start
};

struct MgResult {
  SolveStatus status = SolveStatus::MaxIterations;
  double value = 0.0;            // objective at `optimizer`
  BlockPDMatrix optimizer;
  double stationarity = 0.0;     // gauge-projected gradient norm at optimizer
  std::vector<TracePoint> trace;
  // Direction of divergence when Unbounded. For an imbalance verdict this is
  // gamma*I with gamma = e^{sign(balance)}: scaling B along powers of the
  // witness grows F without bound, and the trace tabulates F along that ray
  // (via the exact scaling law) up past the divergence threshold. For a
  // heuristic verdict it is the last iterate.
  std::optional<BlockPDMatrix> witness;
};

MgResult solve_mg(const BLDatum& datum, const SolverOptions& opts = {});

// F(B) for a feasible B; a rigorous lower bound on M_g.
double certify_lower_bound(const BLDatum& datum, const BlockPDMatrix& B);

// Frobenius norm of the gradient with the scaling-gauge component removed
// (direction {B_i -> B_i}, projected out when the datum is balanced).
double stationarity_residual(const BLDatum& datum, const BlockPDMatrix& B);

}  // namespace blepi
