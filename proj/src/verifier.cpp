#include "blepi/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "blepi/errors.hpp"
#include "blepi/matkernels.hpp"
#include "blepi/objective.hpp"
#include "blepi/parallel.hpp"

namespace blepi {

namespace {

constexpr double kLog2PiE = 2.8378770664093454;
constexpr double kBalancedTol = 1e-9;

struct MeanWithError {
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
};

MeanWithError summarize(const Eigen::VectorXd& values) {
  MeanWithError out;
  const int n = static_cast<int>(values.size());
  out.mean = values.mean();
  out.min = values.minCoeff();
  const double var =
      std::max(0.0, values.array().square().mean() - out.mean * out.mean);
  out.std_error = std::sqrt(var / n);
  return out;
}

void require_surjective(const Eigen::MatrixXd& A) {
  BLDatum probe;
  probe.r = {static_cast<int>(A.cols())};
  probe.c = {1.0};
  probe.d = {1.0};
  probe.maps = {A};
  ValidationReport report = validate_datum(probe);
  if (!report.rank_defects.empty()) {
    throw RankDeficientError("verifier: map is not surjective");
  }
}

}  // namespace

LemmaReport lemma1_check(const Eigen::MatrixXd& A, const TransportMap& map,
                         int n_samples, std::uint64_t seed,
                         const VerifierOptions& opts) {
  const int n = map.dimension();
  const int m = static_cast<int>(A.rows());
  if (A.cols() != n) {
    throw ParameterError("lemma1_check: map dimension does not match A");
  }
  if (n_samples < opts.knn_k + 2) {
    throw ParameterError("lemma1_check: too few samples");
  }
  require_surjective(A);

  StdNormalSampler sampler{n, seed, 0};
  Eigen::MatrixXd pushed(n_samples, m);
  Eigen::VectorXd integrand(n_samples);
  parallel_for(n_samples, [&](int i) {
    const Eigen::VectorXd z = sampler.sample(static_cast<std::uint64_t>(i));
    pushed.row(i) = (A * map.apply(z)).transpose();
    const Eigen::MatrixXd AJ = A * map.jacobian(z);
    Eigen::MatrixXd M = AJ * AJ.transpose();
    integrand(i) = 0.5 * logdet_pd(0.5 * (M + M.transpose()));
  });

  LemmaReport report;
  report.n_samples = n_samples;
  report.seed = seed;
  report.lhs = knn_entropy(pushed, opts.knn_k, opts.jitter);
  report.rhs_exact_part = 0.5 * m * kLog2PiE;

  const MeanWithError expect = summarize(integrand);
  report.rhs_expect.value = expect.mean;
  report.rhs_expect.std_error = expect.std_error;
  report.rhs_expect.method = EntropyMethod::PlugIn;
  report.rhs_expect.n_samples = n_samples;

  report.slack =
      report.lhs.value - report.rhs_exact_part - report.rhs_expect.value;
  report.combined_std_error =
      std::hypot(report.lhs.std_error, report.rhs_expect.std_error);
  report.passed = report.slack >= -3.0 * report.combined_std_error;
  return report;
}

TheoremReport theorem_gap_gaussian(const BLDatum& datum,
                                   const std::vector<Eigen::MatrixXd>& Sigmas,
                                   double mg) {
  ValidationReport validation = validate_datum(datum);
  if (!validation.ok) {
    throw ParameterError("theorem_gap_gaussian: invalid datum");
  }
  if (std::abs(validation.balance) > kBalancedTol) {
    throw ParameterError(
        "theorem_gap_gaussian: datum is unbalanced; closed-form cancellation "
        "does not apply");
  }
  if (static_cast<int>(Sigmas.size()) != datum.k()) {
    throw ParameterError("theorem_gap_gaussian: need one covariance per block");
  }

  BlockPDMatrix Sigma;
  Sigma.blocks = Sigmas;
  check_compatible(datum, Sigma);
  const Eigen::MatrixXd joint = Sigma.assemble();

  TheoremReport report;
  report.mode = TheoremMode::GaussianClosedForm;
  report.mg = mg;

  double lhs = 0.0;
  for (int i = 0; i < datum.k(); ++i) {
    const double h = gaussian_entropy(Sigmas[i]).value;
    report.block_entropies.push_back(h);
    report.block_std_errors.push_back(0.0);
    lhs += datum.c[i] * h;
  }
  for (int j = 0; j < datum.m(); ++j) {
    const Eigen::MatrixXd& A = datum.maps[j];
    Eigen::MatrixXd M = A * joint * A.transpose();
    const double h = gaussian_entropy(0.5 * (M + M.transpose())).value;
    report.map_entropies.push_back(h);
    report.map_std_errors.push_back(0.0);
    lhs -= datum.d[j] * h;
  }

  // Balanced data cancel the (2 pi e) terms, so the entropy form must agree
  // with the log-det objective.
  const double f = objective_value(datum, Sigma);
  if (std::abs(lhs - f) > 1e-10 * std::max(1.0, std::abs(f))) {
    throw std::logic_error(
        "theorem_gap_gaussian: entropy form disagrees with objective: " +
        std::to_string(lhs) + " vs " + std::to_string(f));
  }

  report.lhs = lhs;
  report.gap = mg - lhs;
  report.passed = report.gap >= -1e-10;
  return report;
}

TheoremReport theorem_check_sampled(const BLDatum& datum,
                                    const std::vector<Distribution1D>& targets,
                                    int n_samples, std::uint64_t seed,
                                    double mg, const VerifierOptions& opts) {
  ValidationReport validation = validate_datum(datum);
  if (!validation.ok) {
    throw ParameterError("theorem_check_sampled: invalid datum");
  }
  for (int ri : datum.r) {
    if (ri != 1) {
      throw ParameterError(
          "theorem_check_sampled: sampled mode needs scalar blocks (r_i = 1)");
    }
  }
  const int k = datum.k();
  if (static_cast<int>(targets.size()) != k) {
    throw ParameterError("theorem_check_sampled: need one target per block");
  }
  if (n_samples < opts.knn_k + 2) {
    throw ParameterError("theorem_check_sampled: too few samples");
  }

  // Entropy balance: sum c_i h(Z_i) = sum d_j h(Z'_j) for standard normals.
  if (std::abs(validation.balance) <= kBalancedTol) {
    double z_terms = 0.0;
    for (int i = 0; i < k; ++i) z_terms += datum.c[i] * 0.5 * kLog2PiE;
    for (int j = 0; j < datum.m(); ++j) {
      z_terms -= datum.d[j] * datum.map_dim(j) * 0.5 * kLog2PiE;
    }
    if (std::abs(z_terms) > 1e-12 * kLog2PiE * datum.n()) {
      throw std::logic_error(
          "theorem_check_sampled: entropy balance identity violated");
    }
  }

  // Pushforward samples, one substream per block.
  std::vector<TransportMap> maps;
  maps.reserve(k);
  for (const auto& target : targets) {
    maps.push_back(monotone_1d_map(target));
  }
  Eigen::MatrixXd X(n_samples, k);
  parallel_for(k, [&](int i) {
    StdNormalSampler sampler{1, seed, static_cast<std::uint64_t>(i)};
    for (int s = 0; s < n_samples; ++s) {
      X(s, i) = maps[i].apply1(
          sampler.sample(static_cast<std::uint64_t>(s))(0));
    }
  });

  TheoremReport report;
  report.mode = TheoremMode::Sampled;
  report.mg = mg;
  report.n_samples = n_samples;
  report.seed = seed;

  double lhs = 0.0, var = 0.0;
  for (int i = 0; i < k; ++i) {
    const Distribution1D& target = targets[i];
    EntropyEstimate est = plugin_entropy(
        [&target](const Eigen::VectorXd& x) { return target.log_density(x(0)); },
        X.col(i));
    report.block_entropies.push_back(est.value);
    report.block_std_errors.push_back(est.std_error);
    lhs += datum.c[i] * est.value;
    var += datum.c[i] * datum.c[i] * est.std_error * est.std_error;
  }
  for (int j = 0; j < datum.m(); ++j) {
    const Eigen::MatrixXd pushed = X * datum.maps[j].transpose();
    EntropyEstimate est = knn_entropy(pushed, opts.knn_k, opts.jitter);
    report.map_entropies.push_back(est.value);
    report.map_std_errors.push_back(est.std_error);
    lhs -= datum.d[j] * est.value;
    var += datum.d[j] * datum.d[j] * est.std_error * est.std_error;
  }

  report.lhs = lhs;
  report.lhs_std_error = std::sqrt(var);
  report.gap = mg - lhs;
  report.gap_std_error = report.lhs_std_error;
  report.passed = report.gap >= -3.0 * report.gap_std_error;
  return report;
}

ProofChainAudit proof_chain_audit(const Eigen::MatrixXd& A,
                                  const TransportMap& map, int n_samples,
                                  std::uint64_t seed,
                                  const VerifierOptions& opts) {
  const int n = map.dimension();
  const int m = static_cast<int>(A.rows());
  if (A.cols() != n) {
    throw ParameterError("proof_chain_audit: map dimension does not match A");
  }
  if (opts.strata < 1) {
    throw ParameterError("proof_chain_audit: strata must be >= 1");
  }
  require_surjective(A);
  const QRSplit split = qr_pos_diag(A.transpose());

  ProofChainAudit audit;
  audit.n_samples = n_samples;
  audit.seed = seed;
  audit.strata = opts.strata;
  audit.h_z = 0.5 * m * kLog2PiE;
  audit.logdet_r1 = 0.0;
  for (int i = 0; i < m; ++i) audit.logdet_r1 += std::log(split.R1(i, i));

  StdNormalSampler z_sampler{m, seed, 0};
  StdNormalSampler zprime_sampler{n - m, seed, 1};

  Eigen::MatrixXd pushed(n_samples, m);
  Eigen::VectorXd zprime_first(n_samples);
  Eigen::VectorXd cov_integrand(n_samples);
  Eigen::VectorXd det_integrand(n_samples);
  parallel_for(n_samples, [&](int i) {
    const Eigen::VectorXd z = z_sampler.sample(static_cast<std::uint64_t>(i));
    Eigen::VectorXd ztilde = split.Q1 * z;
    if (n > m) {
      const Eigen::VectorXd zp =
          zprime_sampler.sample(static_cast<std::uint64_t>(i));
      ztilde += split.Q2 * zp;
      zprime_first(i) = zp(0);
    } else {
      zprime_first(i) = 0.0;
    }
    pushed.row(i) = (A * map.apply(ztilde)).transpose();
    const Eigen::MatrixXd J = map.jacobian(ztilde);
    const Eigen::MatrixXd QJQ = split.Q1.transpose() * J * split.Q1;
    const Eigen::MatrixXd JQ = J * split.Q1;
    const Eigen::MatrixXd QJ2Q = JQ.transpose() * JQ;
    const double log_unsquared = logdet_pd(0.5 * (QJQ + QJQ.transpose()));
    const double log_squared = logdet_pd(0.5 * (QJ2Q + QJ2Q.transpose()));
    cov_integrand(i) = log_unsquared;
    det_integrand(i) = log_squared - 2.0 * log_unsquared;
  });

  audit.lhs_entropy = knn_entropy(pushed, opts.knn_k, opts.jitter);

  const MeanWithError cov = summarize(cov_integrand);
  audit.cov_expect.value = cov.mean;
  audit.cov_expect.std_error = cov.std_error;
  audit.cov_expect.method = EntropyMethod::PlugIn;
  audit.cov_expect.n_samples = n_samples;
  audit.cov_value = audit.h_z + cov.mean + audit.logdet_r1;

  const MeanWithError det = summarize(det_integrand);
  audit.det_ineq_slack.value = det.mean;
  audit.det_ineq_slack.std_error = det.std_error;
  audit.det_ineq_slack.method = EntropyMethod::PlugIn;
  audit.det_ineq_slack.n_samples = n_samples;
  audit.det_ineq_min = det.min;
  audit.det_ineq_nonneg = det.min >= -1e-12;

  if (n == m) {
    audit.conditional_skipped = true;
    audit.ab_slack = 0.0;
    audit.ab_std_error = audit.lhs_entropy.std_error;
    audit.ab_ok = true;
    audit.bc_diff = audit.lhs_entropy.value - audit.cov_value;
    audit.bc_std_error =
        std::hypot(audit.lhs_entropy.std_error, audit.cov_expect.std_error);
    audit.bc_equal_within_3se =
        std::abs(audit.bc_diff) <= 3.0 * audit.bc_std_error;
    return audit;
  }

  // Conditional surrogate: quantile cells of the first coordinate of z'.
  std::vector<int> order(n_samples);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return zprime_first(a) < zprime_first(b);
  });
  double cond_sum = 0.0, cond_var = 0.0;
  int used_cells = 0;
  for (int cell = 0; cell < opts.strata; ++cell) {
    const int begin = static_cast<int>(
        static_cast<std::int64_t>(cell) * n_samples / opts.strata);
    const int end = static_cast<int>(
        static_cast<std::int64_t>(cell + 1) * n_samples / opts.strata);
    if (end - begin < opts.knn_k + 2) continue;
    Eigen::MatrixXd cell_pts(end - begin, m);
    for (int p = begin; p < end; ++p) {
      cell_pts.row(p - begin) = pushed.row(order[p]);
    }
    EntropyEstimate est = knn_entropy(cell_pts, opts.knn_k, opts.jitter);
    cond_sum += est.value;
    cond_var += est.std_error * est.std_error;
    ++used_cells;
  }
  if (used_cells == 0) {
    throw ParameterError("proof_chain_audit: strata too fine for sample count");
  }
  audit.conditional_entropy.value = cond_sum / used_cells;
  audit.conditional_entropy.std_error = std::sqrt(cond_var) / used_cells;
  audit.conditional_entropy.method = EntropyMethod::KNN;
  audit.conditional_entropy.n_samples = n_samples;

  audit.ab_slack = audit.lhs_entropy.value - audit.conditional_entropy.value;
  audit.ab_std_error = std::hypot(audit.lhs_entropy.std_error,
                                  audit.conditional_entropy.std_error);
  audit.ab_ok = audit.ab_slack >= -3.0 * audit.ab_std_error;

  audit.bc_diff = audit.conditional_entropy.value - audit.cov_value;
  audit.bc_std_error = std::hypot(audit.conditional_entropy.std_error,
                                  audit.cov_expect.std_error);
  audit.bc_equal_within_3se =
      std::abs(audit.bc_diff) <= 3.0 * audit.bc_std_error;
  return audit;
}

}  // namespace blepi
