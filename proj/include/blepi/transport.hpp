#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "blepi/distributions.hpp"

// Brenier maps with evaluable Jacobians: linear PD maps between centered
// Gaussians, coordinatewise monotone rearrangements for 1-D blocks, and
// blockwise products of either.

namespace blepi {

// Standard-normal arguments are clamped to this range before quantile
// evaluation; beyond it the CDF saturates at double precision.
inline constexpr double kMonotoneClamp = 8.0;

class TransportMap {
 public:
  enum class Kind { LinearPD, Monotone1D, Product };

  static TransportMap linear(Eigen::MatrixXd S);  // S symmetric PD
  static TransportMap monotone(Distribution1D target);
  static TransportMap product(std::vector<TransportMap> components,
                              const std::vector<int>& partition);

  Kind kind() const { return kind_; }
  int dimension() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;

  // Pointwise Jacobian: constant S for linear maps, positive diagonal for
  // monotone coordinates, block-diagonal for products. Always symmetric PD;
  // throws NumericalDomainError if a derivative is nonpositive/non-finite.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;

  // Scalar forms for 1-D monotone maps.
  double apply1(double z) const;
  double derivative1(double z) const;

  const Eigen::MatrixXd& linear_matrix() const;
  const Distribution1D& target() const;
  const std::vector<TransportMap>& components() const;

 private:
  TransportMap() = default;

  Kind kind_ = Kind::LinearPD;
  Eigen::MatrixXd S_;
  std::vector<Distribution1D> target_;  // singleton for Monotone1D
  std::vector<TransportMap> components_;
  std::vector<int> partition_;
};

// Linear Brenier map pushing N(0,I) to N(0,Sigma): S = Sigma^{1/2}.
TransportMap gaussian_brenier(const Eigen::MatrixXd& Sigma);

// 1-D monotone rearrangement T(z) = quantile(Phi(z)) onto the target.
TransportMap monotone_1d_map(const Distribution1D& target);

// Blockwise product; component dimensions must match the partition.
TransportMap product_map(std::vector<TransportMap> components,
                         const std::vector<int>& partition);

// Reproducible standard normal draws: sample(index) depends only on
// (seed, stream, index).
struct StdNormalSampler {
  int dimension = 1;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  Eigen::VectorXd sample(std::uint64_t index) const;
  // Rows are samples first_index..first_index+count-1.
  Eigen::MatrixXd sample_matrix(std::uint64_t first_index, int count) const;
};

}  // namespace blepi
