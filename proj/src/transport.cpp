#include "blepi/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "blepi/errors.hpp"
#include "blepi/matkernels.hpp"
#include "blepi/rng.hpp"

namespace blepi {

TransportMap TransportMap::linear(Eigen::MatrixXd S) {
  if (S.rows() != S.cols()) {
    throw ParameterError("TransportMap::linear: matrix is not square");
  }
  logdet_pd(S);  // rejects non-symmetric-PD inputs
  TransportMap map;
  map.kind_ = Kind::LinearPD;
  map.S_ = std::move(S);
  return map;
}

TransportMap TransportMap::monotone(Distribution1D target) {
  TransportMap map;
  map.kind_ = Kind::Monotone1D;
  map.target_.push_back(std::move(target));
  return map;
}

TransportMap TransportMap::product(std::vector<TransportMap> components,
                                   const std::vector<int>& partition) {
  if (components.size() != partition.size()) {
    throw ParameterError("product_map: components and partition differ");
  }
  for (size_t i = 0; i < components.size(); ++i) {
    if (components[i].dimension() != partition[i]) {
      throw ParameterError("product_map: component " + std::to_string(i) +
                           " has dimension " +
                           std::to_string(components[i].dimension()) +
                           ", partition wants " +
                           std::to_string(partition[i]));
    }
  }
  TransportMap map;
  map.kind_ = Kind::Product;
  map.components_ = std::move(components);
  map.partition_ = partition;
  return map;
}

int TransportMap::dimension() const {
  switch (kind_) {
    case Kind::LinearPD: return static_cast<int>(S_.rows());
    case Kind::Monotone1D: return 1;
    case Kind::Product:
      return std::accumulate(partition_.begin(), partition_.end(), 0);
  }
  return 0;
}

double TransportMap::apply1(double z) const {
  if (kind_ != Kind::Monotone1D) {
    throw ParameterError("apply1: not a 1-D monotone map");
  }
  const double zc = std::clamp(z, -kMonotoneClamp, kMonotoneClamp);
  return target_[0].quantile(normal_cdf(zc));
}

double TransportMap::derivative1(double z) const {
  if (kind_ != Kind::Monotone1D) {
    throw ParameterError("derivative1: not a 1-D monotone map");
  }
  const double zc = std::clamp(z, -kMonotoneClamp, kMonotoneClamp);
  const double x = target_[0].quantile(normal_cdf(zc));
  const double deriv = normal_pdf(zc) / target_[0].density(x);
  if (!(deriv > 0.0) || !std::isfinite(deriv)) {
    throw NumericalDomainError("monotone map derivative is not positive at z=" +
                               std::to_string(z));
  }
  return deriv;
}

Eigen::VectorXd TransportMap::apply(const Eigen::VectorXd& z) const {
  if (z.size() != dimension()) {
    throw ParameterError("TransportMap::apply: dimension mismatch");
  }
  switch (kind_) {
    case Kind::LinearPD:
      return S_ * z;
    case Kind::Monotone1D: {
      Eigen::VectorXd out(1);
      out(0) = apply1(z(0));
      return out;
    }
    case Kind::Product: {
      Eigen::VectorXd out(z.size());
      int offset = 0;
      for (size_t i = 0; i < components_.size(); ++i) {
        out.segment(offset, partition_[i]) =
            components_[i].apply(z.segment(offset, partition_[i]));
        offset += partition_[i];
      }
      return out;
    }
  }
  return {};
}

Eigen::MatrixXd TransportMap::jacobian(const Eigen::VectorXd& z) const {
  if (z.size() != dimension()) {
    throw ParameterError("TransportMap::jacobian: dimension mismatch");
  }
  switch (kind_) {
    case Kind::LinearPD:
      return S_;
    case Kind::Monotone1D: {
      Eigen::MatrixXd J(1, 1);
      J(0, 0) = derivative1(z(0));
      return J;
    }
    case Kind::Product: {
      const int n = dimension();
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
      int offset = 0;
      for (size_t i = 0; i < components_.size(); ++i) {
        J.block(offset, offset, partition_[i], partition_[i]) =
            components_[i].jacobian(z.segment(offset, partition_[i]));
        offset += partition_[i];
      }
      return J;
    }
  }
  return {};
}

const Eigen::MatrixXd& TransportMap::linear_matrix() const {
  if (kind_ != Kind::LinearPD) {
    throw ParameterError("linear_matrix: not a linear map");
  }
  return S_;
}

const Distribution1D& TransportMap::target() const {
  if (kind_ != Kind::Monotone1D) {
    throw ParameterError("target: not a 1-D monotone map");
  }
  return target_[0];
}

const std::vector<TransportMap>& TransportMap::components() const {
  if (kind_ != Kind::Product) {
    throw ParameterError("components: not a product map");
  }
  return components_;
}

TransportMap gaussian_brenier(const Eigen::MatrixXd& Sigma) {
  return TransportMap::linear(pd_sqrt(Sigma));
}

TransportMap monotone_1d_map(const Distribution1D& target) {
  return TransportMap::monotone(target);
}

TransportMap product_map(std::vector<TransportMap> components,
                         const std::vector<int>& partition) {
  return TransportMap::product(std::move(components), partition);
}

Eigen::VectorXd StdNormalSampler::sample(std::uint64_t index) const {
  Eigen::VectorXd z(dimension);
  for (int c = 0; c < dimension; ++c) {
    z(c) = rng::standard_normal(seed, stream,
                                index * static_cast<std::uint64_t>(dimension) +
                                    static_cast<std::uint64_t>(c));
  }
  return z;
}

Eigen::MatrixXd StdNormalSampler::sample_matrix(std::uint64_t first_index,
                                                int count) const {
  Eigen::MatrixXd Z(count, dimension);
  for (int i = 0; i < count; ++i) {
    Z.row(i) = sample(first_index + static_cast<std::uint64_t>(i)).transpose();
  }
  return Z;
}

}  // namespace blepi
