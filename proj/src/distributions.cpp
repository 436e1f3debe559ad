#include "blepi/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "blepi/errors.hpp"

namespace blepi {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kLog2Pi = 1.8378770664093454;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Acklam's rational approximation for the standard normal quantile.
double normal_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericalDomainError("normal_quantile: p outside (0,1)");
  }
  double x = normal_quantile_approx(p);
  // One Halley step against the exact CDF.
  const double e = normal_cdf(x) - p;
  const double u = e / normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

Distribution1D Distribution1D::normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("normal: sigma must be > 0");
  Distribution1D d;
  d.kind_ = Kind::Normal;
  d.mu_ = mu;
  d.sigma_ = sigma;
  return d;
}

Distribution1D Distribution1D::exponential(double rate) {
  if (!(rate > 0.0)) throw ParameterError("exponential: rate must be > 0");
  Distribution1D d;
  d.kind_ = Kind::Exponential;
  d.rate_ = rate;
  return d;
}

Distribution1D Distribution1D::uniform(double a, double b) {
  if (!(b > a)) throw ParameterError("uniform: requires b > a");
  Distribution1D d;
  d.kind_ = Kind::Uniform;
  d.a_ = a;
  d.b_ = b;
  return d;
}

Distribution1D Distribution1D::gaussian_mixture(std::vector<double> weights,
                                                std::vector<double> means,
                                                std::vector<double> sigmas) {
  if (weights.empty() || weights.size() != means.size() ||
      weights.size() != sigmas.size()) {
    throw ParameterError("gaussian_mixture: weights/means/sigmas mismatch");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ParameterError("gaussian_mixture: weight <= 0");
    total += w;
  }
  for (double s : sigmas) {
    if (!(s > 0.0)) throw ParameterError("gaussian_mixture: sigma <= 0");
  }
  for (double& w : weights) w /= total;
  Distribution1D d;
  d.kind_ = Kind::GaussianMixture;
  d.weights_ = std::move(weights);
  d.means_ = std::move(means);
  d.sigmas_ = std::move(sigmas);
  return d;
}

std::string Distribution1D::kind_name() const {
  switch (kind_) {
    case Kind::Normal: return "normal";
    case Kind::Exponential: return "exponential";
    case Kind::Uniform: return "uniform";
    case Kind::GaussianMixture: return "gaussian_mixture";
  }
  return "?";
}

double Distribution1D::cdf(double x) const {
  switch (kind_) {
    case Kind::Normal:
      return normal_cdf((x - mu_) / sigma_);
    case Kind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x);
    case Kind::Uniform:
      return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
    case Kind::GaussianMixture: {
      double s = 0.0;
      for (size_t i = 0; i < weights_.size(); ++i) {
        s += weights_[i] * normal_cdf((x - means_[i]) / sigmas_[i]);
      }
      return s;
    }
  }
  return 0.0;
}

double Distribution1D::density(double x) const {
  switch (kind_) {
    case Kind::Normal:
      return normal_pdf((x - mu_) / sigma_) / sigma_;
    case Kind::Exponential:
      return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x);
    case Kind::Uniform:
      return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    case Kind::GaussianMixture: {
      double s = 0.0;
      for (size_t i = 0; i < weights_.size(); ++i) {
        s += weights_[i] * normal_pdf((x - means_[i]) / sigmas_[i]) /
             sigmas_[i];
      }
      return s;
    }
  }
  return 0.0;
}

double Distribution1D::log_density(double x) const {
  switch (kind_) {
    case Kind::Normal: {
      const double z = (x - mu_) / sigma_;
      return -0.5 * kLog2Pi - std::log(sigma_) - 0.5 * z * z;
    }
    case Kind::Exponential:
      return x < 0.0 ? -kInf : std::log(rate_) - rate_ * x;
    case Kind::Uniform:
      return (x >= a_ && x <= b_) ? -std::log(b_ - a_) : -kInf;
    case Kind::GaussianMixture: {
      // log-sum-exp over component log densities
      double best = -kInf;
      std::vector<double> terms(weights_.size());
      for (size_t i = 0; i < weights_.size(); ++i) {
        const double z = (x - means_[i]) / sigmas_[i];
        terms[i] = std::log(weights_[i]) - 0.5 * kLog2Pi -
                   std::log(sigmas_[i]) - 0.5 * z * z;
        best = std::max(best, terms[i]);
      }
      if (!std::isfinite(best)) return -kInf;
      double s = 0.0;
      for (double t : terms) s += std::exp(t - best);
      return best + std::log(s);
    }
  }
  return -kInf;
}

double Distribution1D::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericalDomainError("quantile: p outside (0,1)");
  }
  switch (kind_) {
    case Kind::Normal:
      return mu_ + sigma_ * normal_quantile(p);
    case Kind::Exponential:
      return -std::log1p(-p) / rate_;
    case Kind::Uniform:
      return a_ + p * (b_ - a_);
    case Kind::GaussianMixture: {
      double lo = kInf, hi = -kInf;
      for (size_t i = 0; i < weights_.size(); ++i) {
        lo = std::min(lo, means_[i] - 12.0 * sigmas_[i]);
        hi = std::max(hi, means_[i] + 12.0 * sigmas_[i]);
      }
      while (cdf(lo) > p) lo -= (hi - lo);
      while (cdf(hi) < p) hi += (hi - lo);
      for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
      }
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 50; ++it) {
        const double f = density(x);
        if (!(f > 0.0)) break;
        const double dx = (cdf(x) - p) / f;
        x -= dx;
        x = std::clamp(x, lo - 1.0, hi + 1.0);
        if (std::abs(dx) < 1e-12) break;
      }
      return x;
    }
  }
  return 0.0;
}

double Distribution1D::mean() const {
  switch (kind_) {
    case Kind::Normal: return mu_;
    case Kind::Exponential: return 1.0 / rate_;
    case Kind::Uniform: return 0.5 * (a_ + b_);
    case Kind::GaussianMixture: {
      double m = 0.0;
      for (size_t i = 0; i < weights_.size(); ++i) m += weights_[i] * means_[i];
      return m;
    }
  }
  return 0.0;
}

double Distribution1D::variance() const {
  switch (kind_) {
    case Kind::Normal: return sigma_ * sigma_;
    case Kind::Exponential: return 1.0 / (rate_ * rate_);
    case Kind::Uniform: return (b_ - a_) * (b_ - a_) / 12.0;
    case Kind::GaussianMixture: {
      const double m = mean();
      double v = 0.0;
      for (size_t i = 0; i < weights_.size(); ++i) {
        v += weights_[i] *
             (sigmas_[i] * sigmas_[i] + (means_[i] - m) * (means_[i] - m));
      }
      return v;
    }
  }
  return 0.0;
}

}  // namespace blepi
