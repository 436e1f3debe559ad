#include "blepi/objective.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "blepi/errors.hpp"
#include "blepi/matkernels.hpp"

namespace blepi {

BlockPDMatrix BlockPDMatrix::identity(const std::vector<int>& partition) {
  BlockPDMatrix B;
  B.blocks.reserve(partition.size());
  for (int ri : partition) {
    B.blocks.push_back(Eigen::MatrixXd::Identity(ri, ri));
  }
  return B;
}

int BlockPDMatrix::dimension() const {
  int n = 0;
  for (const auto& block : blocks) n += static_cast<int>(block.rows());
  return n;
}

Eigen::MatrixXd BlockPDMatrix::assemble() const {
  const int n = dimension();
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  int offset = 0;
  for (const auto& block : blocks) {
    const int ri = static_cast<int>(block.rows());
    full.block(offset, offset, ri, ri) = block;
    offset += ri;
  }
  return full;
}

double BlockPDMatrix::trace() const {
  double t = 0.0;
  for (const auto& block : blocks) t += block.trace();
  return t;
}

double BlockPDMatrix::frobenius_norm() const {
  double sq = 0.0;
  for (const auto& block : blocks) sq += block.squaredNorm();
  return std::sqrt(sq);
}

BlockPDMatrix BlockPDMatrix::scaled(double t) const {
  BlockPDMatrix out;
  out.blocks.reserve(blocks.size());
  for (const auto& block : blocks) out.blocks.push_back(t * block);
  return out;
}

double BlockSymMatrix::frobenius_norm() const {
  double sq = 0.0;
  for (const auto& block : blocks) sq += block.squaredNorm();
  return std::sqrt(sq);
}

double BlockSymMatrix::dot(const BlockPDMatrix& other) const {
  double s = 0.0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    s += blocks[i].cwiseProduct(other.blocks[i]).sum();
  }
  return s;
}

void check_compatible(const BLDatum& datum, const BlockPDMatrix& B) {
  if (B.blocks.size() != datum.r.size()) {
    throw ParameterError("block matrix: expected " +
                         std::to_string(datum.r.size()) + " blocks, got " +
                         std::to_string(B.blocks.size()));
  }
  for (size_t i = 0; i < B.blocks.size(); ++i) {
    const auto& block = B.blocks[i];
    if (block.rows() != datum.r[i] || block.cols() != datum.r[i]) {
      throw ParameterError("block " + std::to_string(i) +
                           " does not match partition dimension " +
                           std::to_string(datum.r[i]));
    }
    const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
    if ((block - block.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ParameterError("block " + std::to_string(i) + " is not symmetric");
    }
  }
}

double objective_value(const BLDatum& datum, const BlockPDMatrix& B) {
  check_compatible(datum, B);
  double value = 0.0;
  for (int i = 0; i < datum.k(); ++i) {
    if (datum.c[i] == 0.0) continue;
    value += 0.5 * datum.c[i] * logdet_pd(B.blocks[i]);
  }
  const Eigen::MatrixXd full = B.assemble();
  for (int j = 0; j < datum.m(); ++j) {
    if (datum.d[j] == 0.0) continue;
    const Eigen::MatrixXd& A = datum.maps[j];
    Eigen::MatrixXd M = A * full * A.transpose();
    M = 0.5 * (M + M.transpose());
    value -= 0.5 * datum.d[j] * logdet_pd(M);
  }
  return value;
}

BlockSymMatrix gradient(const BLDatum& datum, const BlockPDMatrix& B) {
  check_compatible(datum, B);
  const int n = datum.n();
  Eigen::MatrixXd ambient = Eigen::MatrixXd::Zero(n, n);

  int offset = 0;
  for (int i = 0; i < datum.k(); ++i) {
    const int ri = datum.r[i];
    if (datum.c[i] != 0.0) {
      Eigen::LLT<Eigen::MatrixXd> llt(B.blocks[i]);
      if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError("gradient: block " + std::to_string(i) +
                                       " is not positive definite");
      }
      Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(ri, ri));
      ambient.block(offset, offset, ri, ri) +=
          0.5 * datum.c[i] * 0.5 * (inv + inv.transpose());
    }
    offset += ri;
  }

  const Eigen::MatrixXd full = B.assemble();
  for (int j = 0; j < datum.m(); ++j) {
    if (datum.d[j] == 0.0) continue;
    const Eigen::MatrixXd& A = datum.maps[j];
    Eigen::MatrixXd M = A * full * A.transpose();
    M = 0.5 * (M + M.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefiniteError("gradient: A_" + std::to_string(j) +
                                     " B A^T is not positive definite");
    }
    Eigen::MatrixXd Minv =
        llt.solve(Eigen::MatrixXd::Identity(M.rows(), M.cols()));
    ambient -= 0.5 * datum.d[j] * (A.transpose() * Minv * A);
  }

  BlockSymMatrix grad;
  grad.blocks.reserve(datum.r.size());
  offset = 0;
  for (int ri : datum.r) {
    Eigen::MatrixXd block = ambient.block(offset, offset, ri, ri);
    grad.blocks.push_back(0.5 * (block + block.transpose()));
    offset += ri;
  }
  return grad;
}

double scale_invariance_defect(const BLDatum& datum, const BlockPDMatrix& B,
                               double t) {
  if (!(t > 0.0)) throw ParameterError("scale_invariance_defect: t <= 0");
  const double ft = objective_value(datum, B.scaled(t));
  const double f = objective_value(datum, B);
  return ft - f - 0.5 * datum.balance() * std::log(t);
}

}  // namespace blepi
