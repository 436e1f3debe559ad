#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

// Differential entropy in nats: Gaussian closed forms plus sample-based
// estimators with standard errors.

namespace blepi {

enum class EntropyMethod { GaussianClosedForm, PlugIn, KNN };

struct EntropyEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 exactly for closed forms
  EntropyMethod method = EntropyMethod::GaussianClosedForm;
  std::int64_t n_samples = 0;
};

// h(N(0, Sigma)) = 0.5 log((2 pi e)^n det Sigma).
EntropyEstimate gaussian_entropy(const Eigen::MatrixXd& Sigma);

// -(1/N) sum log f(x_i) for samples drawn from f; the standard error is the
// sample standard deviation of -log f over sqrt(N).
EntropyEstimate plugin_entropy(
    const std::function<double(const Eigen::VectorXd&)>& log_density,
    const Eigen::MatrixXd& samples /* N x d */);

// Kozachenko-Leonenko k-nearest-neighbor estimator. Optional deterministic
// jitter (amplitude 1e-10) breaks ties; otherwise duplicate points raise
// DegenerateSampleError.
EntropyEstimate knn_entropy(const Eigen::MatrixXd& samples /* N x d */,
                            int k = 5, bool jitter = false);

// psi(x) for x > 0; exposed for tests.
double digamma(double x);

namespace detail {
// Distance from each point to its k-th nearest neighbor (self excluded).
// Brute force up to 5e4 points, k-d tree above; `force_mode` 1 = brute,
// 2 = tree (testing hook).
Eigen::VectorXd kth_neighbor_distances(const Eigen::MatrixXd& points, int k,
                                       int force_mode = 0);
}  // namespace detail

}  // namespace blepi
