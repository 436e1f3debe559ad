#pragma once

#include <Eigen/Core>

// Dense symmetric/PD primitives shared by the other modules. All matrices
// are dense double precision; sizes stay at desk scale (n of order 100).

namespace blepi {

// Relative floor below which a factorization pivot or eigenvalue is treated
// as nonpositive. Scaled by max(largest diagonal entry, 1).
inline constexpr double kPdTolerance = 1e-12;

// QR split of a tall matrix At = [Q1 Q2] [R1; 0] with diag(R1) > 0.
struct QRSplit {
  Eigen::MatrixXd Q1;  // n x m, orthonormal columns
  Eigen::MatrixXd Q2;  // n x (n - m), orthonormal completion
  Eigen::MatrixXd R1;  // m x m upper triangular, positive diagonal
};

// log det M for symmetric positive definite M, via Cholesky.
// Throws NotPositiveDefiniteError when a pivot falls below tolerance.
double logdet_pd(const Eigen::MatrixXd& M);

// Unique symmetric PD square root S with S*S = M, via eigendecomposition.
Eigen::MatrixXd pd_sqrt(const Eigen::MatrixXd& M);

// Householder QR of an n x m matrix of full column rank (m <= n), with
// column signs normalized so diag(R1) is strictly positive.
// Throws RankDeficientError when a diagonal of R1 collapses.
QRSplit qr_pos_diag(const Eigen::MatrixXd& At, double rank_tol = 1e-10);

}  // namespace blepi
