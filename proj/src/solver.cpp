#include "blepi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blepi/errors.hpp"
#include "blepi/parallel.hpp"
#include "blepi/rng.hpp"

namespace blepi {

namespace {

constexpr double kBalancedTol = 1e-9;   // |balance| below this: treat as balanced
constexpr double kNormGrowthFactor = 1e8;
constexpr double kArmijoC1 = 1e-4;

bool is_balanced(const BLDatum& datum) {
  return std::abs(datum.balance()) <= kBalancedTol;
}

double projected_gradient_norm(const BLDatum& datum, const BlockSymMatrix& G,
                               const BlockPDMatrix& B) {
  if (!is_balanced(datum)) return G.frobenius_norm();
  const double bb = B.frobenius_norm();
  if (bb == 0.0) return G.frobenius_norm();
  const double coef = G.dot(B) / (bb * bb);
  double sq = 0.0;
  for (size_t i = 0; i < G.blocks.size(); ++i) {
    sq += (G.blocks[i] - coef * B.blocks[i]).squaredNorm();
  }
  return std::sqrt(sq);
}

// Residual as it will read after gauge normalization (trace B -> n): the
// gradient scales by 1/t under B -> tB, so measure at the normalized point
// to keep convergence consistent with the reported optimizer.
double gauge_fixed_residual(const BLDatum& datum, const BlockSymMatrix& G,
                            const BlockPDMatrix& B) {
  double stat = projected_gradient_norm(datum, G, B);
  if (is_balanced(datum)) {
    stat *= B.trace() / datum.n();
  }
  return stat;
}

// Factor state: per-block lower-triangular L with strictly positive diagonal,
// so B_i = L_i L_i^T stays PD for any unconstrained step (diagonal moves
// multiplicatively).
struct FactorState {
  std::vector<Eigen::MatrixXd> L;

  BlockPDMatrix to_block_pd() const {
    BlockPDMatrix B;
    B.blocks.reserve(L.size());
    for (const auto& Li : L) {
      Eigen::MatrixXd Bi = Li * Li.transpose();
      B.blocks.push_back(0.5 * (Bi + Bi.transpose()));
    }
    return B;
  }
};

FactorState identity_start(const std::vector<int>& partition) {
  FactorState s;
  s.L.reserve(partition.size());
  for (int ri : partition) s.L.push_back(Eigen::MatrixXd::Identity(ri, ri));
  return s;
}

FactorState random_start(const std::vector<int>& partition, std::uint64_t seed,
                         std::uint64_t stream) {
  FactorState s;
  s.L.reserve(partition.size());
  std::uint64_t idx = 0;
  for (int ri : partition) {
    Eigen::MatrixXd Li = Eigen::MatrixXd::Zero(ri, ri);
    for (int row = 0; row < ri; ++row) {
      for (int col = 0; col < row; ++col) {
        Li(row, col) = 0.3 * rng::standard_normal(seed, stream, idx++);
      }
      Li(row, row) = std::exp(0.5 * rng::standard_normal(seed, stream, idx++));
    }
    s.L.push_back(std::move(Li));
  }
  return s;
}

// Gradient of F in factor coordinates: for B = L L^T the ambient gradient G
// pulls back to 2 G L on the strictly-lower part; the diagonal is
// additionally scaled by L_ii for the log parameterization.
std::vector<Eigen::MatrixXd> factor_gradient(const BlockSymMatrix& G,
                                             const FactorState& state,
                                             double* norm_sq_out) {
  std::vector<Eigen::MatrixXd> dir;
  dir.reserve(state.L.size());
  double norm_sq = 0.0;
  for (size_t i = 0; i < state.L.size(); ++i) {
    Eigen::MatrixXd D = 2.0 * G.blocks[i] * state.L[i];
    const int ri = static_cast<int>(D.rows());
    for (int row = 0; row < ri; ++row) {
      for (int col = row + 1; col < ri; ++col) D(row, col) = 0.0;
      D(row, row) *= state.L[i](row, row);
    }
    norm_sq += D.squaredNorm();
    dir.push_back(std::move(D));
  }
  *norm_sq_out = norm_sq;
  return dir;
}

FactorState take_step(const FactorState& state,
                      const std::vector<Eigen::MatrixXd>& dir, double alpha) {
  FactorState out;
  out.L.reserve(state.L.size());
  for (size_t i = 0; i < state.L.size(); ++i) {
    Eigen::MatrixXd Li = state.L[i];
    const int ri = static_cast<int>(Li.rows());
    for (int row = 0; row < ri; ++row) {
      for (int col = 0; col < row; ++col) {
        Li(row, col) += alpha * dir[i](row, col);
      }
      const double expo =
          std::clamp(alpha * dir[i](row, row), -200.0, 200.0);
      Li(row, row) *= std::exp(expo);
    }
    out.L.push_back(std::move(Li));
  }
  return out;
}

struct RunResult {
  SolveStatus status = SolveStatus::MaxIterations;
  double value = -std::numeric_limits<double>::infinity();
  BlockPDMatrix optimizer;
  double stationarity = std::numeric_limits<double>::infinity();
  std::vector<TracePoint> trace;
  std::optional<BlockPDMatrix> witness;
};

bool finite_objective(const BLDatum& datum, const BlockPDMatrix& B,
                      double* value) {
  try {
    *value = objective_value(datum, B);
  } catch (const NotPositiveDefiniteError&) {
    return false;
  }
  return std::isfinite(*value);
}

RunResult ascend(const BLDatum& datum, FactorState state,
                 const SolverOptions& opts) {
  RunResult run;
  BlockPDMatrix B = state.to_block_pd();
  double f;
  if (!finite_objective(datum, B, &f)) {
    // Degenerate random start; nothing to report from this run.
    run.trace.push_back({0, -std::numeric_limits<double>::infinity(), 0.0});
    return run;
  }
  const double norm0 = std::max(B.frobenius_norm(), 1e-300);
  const double f0 = f;
  double step = opts.step_init;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    BlockSymMatrix G = gradient(datum, B);
    const double stat = gauge_fixed_residual(datum, G, B);
    run.trace.push_back({iter, f, stat});

    if (stat <= opts.stat_tol) {
      run.status = SolveStatus::Converged;
      break;
    }
    if (f > opts.divergence_threshold ||
        (B.frobenius_norm() > kNormGrowthFactor * norm0 && f > f0)) {
      run.status = SolveStatus::Unbounded;
      run.witness = B;
      break;
    }

    double dir_norm_sq = 0.0;
    const auto dir = factor_gradient(G, state, &dir_norm_sq);
    if (!(dir_norm_sq > 0.0)) break;

    bool accepted = false;
    double alpha = step;
    for (int shrink = 0; shrink < 60; ++shrink) {
      FactorState cand = take_step(state, dir, alpha);
      BlockPDMatrix Bc = cand.to_block_pd();
      double fc;
      if (finite_objective(datum, Bc, &fc) &&
          fc >= f + kArmijoC1 * alpha * dir_norm_sq) {
        state = std::move(cand);
        B = std::move(Bc);
        f = fc;
        step = std::min(alpha * 2.0, 1e12);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // line search exhausted at this stationarity
  }

  run.value = f;
  run.optimizer = std::move(B);
  run.stationarity =
      run.trace.empty()
          ? std::numeric_limits<double>::infinity()
          : gauge_fixed_residual(datum, gradient(datum, run.optimizer),
                                 run.optimizer);
  if (run.status == SolveStatus::MaxIterations &&
      run.stationarity <= opts.stat_tol) {
    run.status = SolveStatus::Converged;
  }
  return run;
}

// Imbalance makes F(tI) = F(I) + (balance/2) log t exactly, so the sup is
// +inf along the scaling ray; the trace tabulates that law past the
// divergence threshold without forming the (unrepresentable) iterates.
MgResult imbalance_verdict(const BLDatum& datum, const SolverOptions& opts) {
  const double balance = datum.balance();
  MgResult result;
  result.status = SolveStatus::Unbounded;
  result.optimizer = BlockPDMatrix::identity(datum.r);
  result.value = objective_value(datum, result.optimizer);
  result.stationarity = stationarity_residual(datum, result.optimizer);

  const double slope = 0.5 * std::abs(balance);  // dF/d(log t) along the ray
  double log_t = 1.0;
  int iter = 0;
  result.trace.push_back({iter++, result.value, result.stationarity});
  while (result.value + slope * log_t <= opts.divergence_threshold &&
         iter < 4000) {
    result.trace.push_back({iter++, result.value + slope * log_t, slope});
    log_t *= 2.0;
  }
  result.trace.push_back({iter, result.value + slope * log_t, slope});

  const double gamma = balance > 0.0 ? std::exp(1.0) : std::exp(-1.0);
  result.witness = BlockPDMatrix::identity(datum.r).scaled(gamma);
  return result;
}

}  // namespace

MgResult solve_mg(const BLDatum& datum, const SolverOptions& opts) {
  if (opts.max_iters < 1 || opts.stat_tol <= 0.0 || opts.step_init <= 0.0 ||
      opts.divergence_threshold <= 0.0 || opts.restarts < 0) {
    throw ParameterError("solve_mg: invalid options");
  }
  ValidationReport report = validate_datum(datum);
  if (!report.ok) {
    std::string what = "solve_mg: invalid datum";
    for (const auto& msg : report.messages) what += "; " + msg;
    throw ParameterError(what);
  }

  if (std::abs(datum.balance()) > kBalancedTol) {
    return imbalance_verdict(datum, opts);
  }

  const int runs = opts.restarts + 1;
  std::vector<RunResult> results(runs);
  parallel_for(runs, [&](int i) {
    FactorState start = (i == 0)
                            ? identity_start(datum.r)
                            : random_start(datum.r, opts.seed,
                                           static_cast<std::uint64_t>(i));
    results[i] = ascend(datum, std::move(start), opts);
  });

  // Unbounded verdicts dominate; otherwise prefer the highest value, with
  // near-ties resolved toward Converged, then lower stationarity, then
  // lower restart index.
  int best = -1;
  for (int i = 0; i < runs; ++i) {
    if (results[i].status == SolveStatus::Unbounded) {
      best = i;
      break;
    }
  }
  if (best < 0) {
    for (int i = 0; i < runs; ++i) {
      if (best < 0) {
        best = i;
        continue;
      }
      const RunResult& cand = results[i];
      const RunResult& incumbent = results[best];
      if (cand.value > incumbent.value + 1e-9) {
        best = i;
      } else if (cand.value >= incumbent.value - 1e-9) {
        const bool cand_conv = cand.status == SolveStatus::Converged;
        const bool inc_conv = incumbent.status == SolveStatus::Converged;
        if (cand_conv != inc_conv) {
          if (cand_conv) best = i;
        } else if (cand.stationarity < incumbent.stationarity) {
          best = i;
        }
      }
    }
  }

  RunResult& winner = results[best];
  MgResult result;
  result.status = winner.status;
  result.optimizer = std::move(winner.optimizer);
  result.trace = std::move(winner.trace);
  result.witness = std::move(winner.witness);

  if (result.status == SolveStatus::Converged && is_balanced(datum)) {
    // Gauge fix: normalize the optimizer so sum of block traces equals n.
    const double t = datum.n() / result.optimizer.trace();
    result.optimizer = result.optimizer.scaled(t);
  }
  result.value = objective_value(datum, result.optimizer);
  result.stationarity = stationarity_residual(datum, result.optimizer);
  return result;
}

double certify_lower_bound(const BLDatum& datum, const BlockPDMatrix& B) {
  return objective_value(datum, B);
}

double stationarity_residual(const BLDatum& datum, const BlockPDMatrix& B) {
  BlockSymMatrix G = gradient(datum, B);
  return projected_gradient_norm(datum, G, B);
}

}  // namespace blepi
