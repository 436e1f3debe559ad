#include "blepi/matkernels.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <string>

#include "blepi/errors.hpp"

namespace blepi {

namespace {

void require_square_symmetric(const Eigen::MatrixXd& M, const char* who) {
  if (M.rows() != M.cols()) {
    throw ParameterError(std::string(who) + ": matrix is not square");
  }
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw ParameterError(std::string(who) + ": matrix is not symmetric");
  }
}

double pd_floor(const Eigen::MatrixXd& M) {
  const double largest_diag =
      M.rows() > 0 ? M.diagonal().maxCoeff() : 0.0;
  return kPdTolerance * std::max(largest_diag, 1.0);
}

}  // namespace

double logdet_pd(const Eigen::MatrixXd& M) {
  require_square_symmetric(M, "logdet_pd");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("logdet_pd: Cholesky factorization failed");
  }
  const double floor = pd_floor(M);
  const auto L = llt.matrixLLT().diagonal();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < L.size(); ++i) {
    const double pivot = L(i) * L(i);
    if (!(pivot > floor)) {
      throw NotPositiveDefiniteError(
          "logdet_pd: pivot " + std::to_string(pivot) + " below tolerance");
    }
    logdet += std::log(L(i));
  }
  return 2.0 * logdet;
}

Eigen::MatrixXd pd_sqrt(const Eigen::MatrixXd& M) {
  require_square_symmetric(M, "pd_sqrt");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
  if (eig.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("pd_sqrt: eigendecomposition failed");
  }
  const double floor = pd_floor(M);
  Eigen::VectorXd roots = eig.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (!(roots(i) > floor)) {
      throw NotPositiveDefiniteError(
          "pd_sqrt: eigenvalue " + std::to_string(roots(i)) +
          " below tolerance");
    }
    roots(i) = std::sqrt(roots(i));
  }
  Eigen::MatrixXd S =
      eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (S + S.transpose());
}

QRSplit qr_pos_diag(const Eigen::MatrixXd& At, double rank_tol) {
  const Eigen::Index n = At.rows();
  const Eigen::Index m = At.cols();
  if (m > n) {
    throw ParameterError("qr_pos_diag: more columns than rows");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(At);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd R1 = qr.matrixQR()
                           .topRows(m)
                           .triangularView<Eigen::Upper>();

  double max_pivot = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    max_pivot = std::max(max_pivot, std::abs(R1(j, j)));
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (std::abs(R1(j, j)) <= rank_tol * max_pivot || max_pivot == 0.0) {
      throw RankDeficientError("qr_pos_diag: column rank below " +
                               std::to_string(m));
    }
    if (R1(j, j) < 0.0) {
      R1.row(j) = -R1.row(j);
      Q.col(j) = -Q.col(j);
    }
  }

  QRSplit split;
  split.Q1 = Q.leftCols(m);
  split.Q2 = Q.rightCols(n - m);
  split.R1 = std::move(R1);
  return split;
}

}  // namespace blepi
