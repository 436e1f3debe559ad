#pragma once

#include <string>
#include <vector>

// Catalog of 1-D targets with continuous strictly increasing CDFs, the
// inputs the coordinatewise monotone transport maps are built from.

namespace blepi {

// Standard normal CDF/PDF and quantile (double precision throughout the
// representable tail range).
double normal_cdf(double z);
double normal_pdf(double z);
double normal_quantile(double p);

class Distribution1D {
 public:
  enum class Kind { Normal, Exponential, Uniform, GaussianMixture };

  static Distribution1D normal(double mu, double sigma);
  static Distribution1D exponential(double rate);
  static Distribution1D uniform(double a, double b);
  // Weights are normalized internally; all components need sigma > 0.
  static Distribution1D gaussian_mixture(std::vector<double> weights,
                                         std::vector<double> means,
                                         std::vector<double> sigmas);

  Kind kind() const { return kind_; }
  std::string kind_name() const;

  double cdf(double x) const;
  double density(double x) const;
  double log_density(double x) const;  // -inf outside the support
  // Inverse CDF; mixtures are solved by bisection plus Newton polish to
  // absolute tolerance 1e-12.
  double quantile(double p) const;

  // Mean and variance, used for sanity checks and report metadata.
  double mean() const;
  double variance() const;

  const std::vector<double>& params_weights() const { return weights_; }
  const std::vector<double>& params_means() const { return means_; }
  const std::vector<double>& params_sigmas() const { return sigmas_; }
  double param_mu() const { return mu_; }
  double param_sigma() const { return sigma_; }
  double param_rate() const { return rate_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }

 private:
  Distribution1D() = default;

  Kind kind_ = Kind::Normal;
  double mu_ = 0.0, sigma_ = 1.0;            // normal
  double rate_ = 1.0;                        // exponential
  double a_ = 0.0, b_ = 1.0;                 // uniform
  std::vector<double> weights_, means_, sigmas_;  // mixture
};

}  // namespace blepi
