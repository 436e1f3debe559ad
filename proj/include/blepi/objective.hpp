#pragma once

#include <Eigen/Core>
#include <vector>

#include "blepi/datum.hpp"

// The optimization objective
//   F(B) = 1/2 sum_i c_i log det B_i - 1/2 sum_j d_j log det(A_j B A_j^T)
// over block-diagonal B = diag(B_1,...,B_k) with each B_i symmetric PD.

namespace blepi {

// Block-diagonal symmetric PD matrix matching a datum's partition.
struct BlockPDMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  static BlockPDMatrix identity(const std::vector<int>& partition);

  int dimension() const;
  Eigen::MatrixXd assemble() const;  // full n x n block-diagonal matrix
  double trace() const;
  double frobenius_norm() const;
  BlockPDMatrix scaled(double t) const;
};

// Gradient carrier: symmetric blocks, not necessarily PD.
struct BlockSymMatrix {
  std::vector<Eigen::MatrixXd> blocks;

  double frobenius_norm() const;
  // Frobenius inner product with a block matrix of the same partition.
  double dot(const BlockPDMatrix& other) const;
};

// Checks that B matches the datum's partition and each block is symmetric
// within tolerance; throws ParameterError otherwise.
void check_compatible(const BLDatum& datum, const BlockPDMatrix& B);

double objective_value(const BLDatum& datum, const BlockPDMatrix& B);

// Block-diagonal restriction of the ambient gradient of F at B.
BlockSymMatrix gradient(const BLDatum& datum, const BlockPDMatrix& B);

// F(tB) - F(B) - (balance/2) log t; identically ~0 by the log-det scaling
// law, balanced or not.
double scale_invariance_defect(const BLDatum& datum, const BlockPDMatrix& B,
                               double t);

}  // namespace blepi
