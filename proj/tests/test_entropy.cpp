#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "blepi/entropy.hpp"
#include "blepi/errors.hpp"
#include "blepi/transport.hpp"
#include "oracles.hpp"

using namespace blepi;

namespace {

Eigen::MatrixXd normal_samples(int n, int d, std::uint64_t seed) {
  return StdNormalSampler{d, seed, 0}.sample_matrix(0, n);
}

}  // namespace

TEST_CASE("gaussian entropy closed forms") {
  CHECK(gaussian_entropy(Eigen::MatrixXd::Constant(1, 1, 1.0)).value ==
        doctest::Approx(1.4189385).epsilon(1e-7));
  CHECK(gaussian_entropy(Eigen::MatrixXd::Constant(1, 1, 4.0)).value ==
        doctest::Approx(2.1120857).epsilon(1e-7));
  CHECK(gaussian_entropy(Eigen::MatrixXd::Identity(2, 2)).value ==
        doctest::Approx(2.8378771).epsilon(1e-7));

  const EntropyEstimate est =
      gaussian_entropy(Eigen::MatrixXd::Identity(3, 3));
  CHECK(est.std_error == 0.0);
  CHECK(est.method == EntropyMethod::GaussianClosedForm);

  CHECK_THROWS_AS(gaussian_entropy(Eigen::MatrixXd::Zero(2, 2)),
                  NotPositiveDefiniteError);
}

TEST_CASE("digamma values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
  CHECK(digamma(2.0) == doctest::Approx(1.0 - 0.5772156649015329)
                            .epsilon(1e-12));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667214).epsilon(1e-12));
  CHECK_THROWS_AS(digamma(0.0), NumericalDomainError);
}

TEST_CASE("plugin entropy against closed forms") {
  // standard normal, known log-density
  const int n = 100000;
  const Eigen::MatrixXd z = normal_samples(n, 1, 1);
  const auto normal_logpdf = [](const Eigen::VectorXd& x) {
    return -0.5 * oracles::kLog2PiE + 0.5 - 0.5 * x(0) * x(0);
  };
  // note: -0.5 log(2 pi) = -0.5 log(2 pi e) + 0.5
  const EntropyEstimate est = plugin_entropy(normal_logpdf, z);
  CHECK(est.method == EntropyMethod::PlugIn);
  CHECK(std::abs(est.value - 1.4189385) < 3.0 * est.std_error);
  CHECK(est.std_error > 0.0);

  // constant density: zero variance
  Eigen::MatrixXd u(4, 1);
  u << 0.1, 0.4, 0.5, 0.9;
  const EntropyEstimate flat =
      plugin_entropy([](const Eigen::VectorXd&) { return 0.0; }, u);
  CHECK(flat.value == 0.0);
  CHECK(flat.std_error == 0.0);

  // exponential(1) via the monotone rearrangement; h = 1 nat
  const TransportMap map = monotone_1d_map(Distribution1D::exponential(1.0));
  Eigen::MatrixXd x(n, 1);
  const StdNormalSampler sampler{1, 2, 0};
  for (int i = 0; i < n; ++i) x(i, 0) = map.apply1(sampler.sample(i)(0));
  const Distribution1D target = Distribution1D::exponential(1.0);
  const EntropyEstimate exp_est = plugin_entropy(
      [&](const Eigen::VectorXd& v) { return target.log_density(v(0)); }, x);
  CHECK(std::abs(exp_est.value - 1.0) < 3.0 * exp_est.std_error);

  // non-finite log density
  CHECK_THROWS_AS(
      plugin_entropy(
          [](const Eigen::VectorXd&) {
            return -std::numeric_limits<double>::infinity();
          },
          u),
      NumericalDomainError);
}

TEST_CASE("knn entropy calibration at 2e4 samples") {
  const int n = 20000;
  const EntropyEstimate g1 = knn_entropy(normal_samples(n, 1, 3), 5);
  CHECK(g1.method == EntropyMethod::KNN);
  CHECK(std::abs(g1.value - 1.4189385) < 0.05);

  // U(0,1) via the uniform rearrangement, h = 0
  const TransportMap map = monotone_1d_map(Distribution1D::uniform(0, 1));
  Eigen::MatrixXd u(n, 1);
  const StdNormalSampler sampler{1, 4, 0};
  for (int i = 0; i < n; ++i) u(i, 0) = map.apply1(sampler.sample(i)(0));
  CHECK(std::abs(knn_entropy(u, 5).value - 0.0) < 0.05);

  const EntropyEstimate g2 = knn_entropy(normal_samples(n, 2, 5), 5);
  CHECK(std::abs(g2.value - 2.8378771) < 0.08);
}

TEST_CASE("knn affine law") {
  const Eigen::MatrixXd x = normal_samples(5000, 1, 6);
  const EntropyEstimate base = knn_entropy(x, 5);
  const EntropyEstimate scaled =
      knn_entropy((2.0 * x.array() + 3.0).matrix(), 5);
  const double se = std::hypot(base.std_error, scaled.std_error);
  CHECK(std::abs(scaled.value - base.value - std::log(2.0)) < 2.0 * se);
}

TEST_CASE("knn duplicate handling") {
  Eigen::MatrixXd pts(8, 1);
  pts << 1, 1, 1, 1, 1, 1, 2, 3;  // six coincident points swamp k = 5
  CHECK_THROWS_AS(knn_entropy(pts, 5, false), DegenerateSampleError);
  CHECK_NOTHROW(knn_entropy(pts, 5, true));  // jitter separates them

  CHECK_THROWS_AS(knn_entropy(pts, 0), ParameterError);
  CHECK_THROWS_AS(knn_entropy(pts, 8), ParameterError);
}

TEST_CASE("brute force and kd-tree neighbor distances agree exactly") {
  const Eigen::MatrixXd pts = normal_samples(3000, 2, 8);
  const Eigen::VectorXd brute = detail::kth_neighbor_distances(pts, 5, 1);
  const Eigen::VectorXd tree = detail::kth_neighbor_distances(pts, 5, 2);
  CHECK((brute - tree).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("knn error trend is nonincreasing in sample size") {
  const double truth = 0.5 * oracles::kLog2PiE;
  std::vector<double> med_err;
  for (int n : {1000, 10000, 100000}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const EntropyEstimate est = knn_entropy(normal_samples(n, 1, 50 + seed));
      errs.push_back(std::abs(est.value - truth));
    }
    std::sort(errs.begin(), errs.end());
    med_err.push_back(0.5 * (errs[4] + errs[5]));
  }
  CHECK(med_err[0] >= med_err[1]);
  CHECK(med_err[1] >= med_err[2]);
}

TEST_CASE("plugin and knn agree on the exponential target") {
  const int n = 100000;
  const TransportMap map = monotone_1d_map(Distribution1D::exponential(1.0));
  Eigen::MatrixXd x(n, 1);
  const StdNormalSampler sampler{1, 9, 0};
  for (int i = 0; i < n; ++i) x(i, 0) = map.apply1(sampler.sample(i)(0));

  const Distribution1D target = Distribution1D::exponential(1.0);
  const EntropyEstimate plug = plugin_entropy(
      [&](const Eigen::VectorXd& v) { return target.log_density(v(0)); }, x);
  const EntropyEstimate knn = knn_entropy(x, 5);
  const double se = std::hypot(plug.std_error, knn.std_error);
  CHECK(std::abs(plug.value - knn.value) < 3.0 * se);
}
