#include "blepi/datum.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numeric>

#include "blepi/errors.hpp"

namespace blepi {

namespace {

void require_structure(const BLDatum& datum) {
  if (datum.r.empty()) {
    throw ParameterError("datum: partition r is empty");
  }
  if (datum.maps.empty()) {
    throw ParameterError("datum: no maps");
  }
  if (datum.c.size() != datum.r.size()) {
    throw ParameterError("datum: c and r lengths differ");
  }
  if (datum.d.size() != datum.maps.size()) {
    throw ParameterError("datum: d and maps lengths differ");
  }
  for (int ri : datum.r) {
    if (ri < 1) throw ParameterError("datum: block dimension < 1");
  }
  const int n = std::accumulate(datum.r.begin(), datum.r.end(), 0);
  for (size_t j = 0; j < datum.maps.size(); ++j) {
    if (datum.maps[j].cols() != n) {
      throw ParameterError("datum: map " + std::to_string(j) + " has " +
                           std::to_string(datum.maps[j].cols()) +
                           " columns, expected " + std::to_string(n));
    }
    if (datum.maps[j].rows() < 1) {
      throw ParameterError("datum: map " + std::to_string(j) + " has no rows");
    }
  }
}

}  // namespace

int BLDatum::n() const {
  return std::accumulate(r.begin(), r.end(), 0);
}

double BLDatum::balance() const {
  double bal = 0.0;
  for (size_t i = 0; i < r.size(); ++i) bal += c[i] * r[i];
  for (size_t j = 0; j < maps.size(); ++j) bal -= d[j] * maps[j].rows();
  return bal;
}

ValidationReport validate_datum(const BLDatum& datum, double rank_tol) {
  require_structure(datum);

  ValidationReport report;
  report.balance = datum.balance();

  bool signs_ok = true;
  for (size_t i = 0; i < datum.c.size(); ++i) {
    if (datum.c[i] < 0.0) {
      signs_ok = false;
      report.messages.push_back("c[" + std::to_string(i) + "] is negative");
    }
  }
  for (size_t j = 0; j < datum.d.size(); ++j) {
    if (datum.d[j] < 0.0) {
      signs_ok = false;
      report.messages.push_back("d[" + std::to_string(j) + "] is negative");
    }
  }

  for (int j = 0; j < datum.m(); ++j) {
    const Eigen::MatrixXd& A = datum.maps[j];
    bool full_row_rank = A.rows() <= A.cols();
    if (full_row_rank) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
      const auto& sv = svd.singularValues();
      full_row_rank = sv(0) > 0.0 &&
                      sv(sv.size() - 1) > rank_tol * sv(0);
    }
    if (!full_row_rank) {
      report.rank_defects.push_back(j);
      report.messages.push_back("map " + std::to_string(j) +
                                " is not surjective (row rank deficient)");
    }
  }

  if (report.balance != 0.0) {
    report.messages.push_back("dimension balance is nonzero: " +
                              std::to_string(report.balance));
  }

  report.ok = signs_ok && report.rank_defects.empty();
  return report;
}

BLDatum identity_datum(int n) {
  if (n < 1) throw ParameterError("identity_datum: n must be >= 1");
  BLDatum datum;
  datum.r = {n};
  datum.c = {1.0};
  datum.d = {1.0};
  datum.maps = {Eigen::MatrixXd::Identity(n, n)};
  return datum;
}

BLDatum epi_datum(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ParameterError("epi_datum: lambda must lie in (0,1)");
  }
  BLDatum datum;
  datum.r = {1, 1};
  datum.c = {lambda, 1.0 - lambda};
  datum.d = {1.0};
  Eigen::MatrixXd A(1, 2);
  A << std::sqrt(lambda), std::sqrt(1.0 - lambda);
  datum.maps = {A};
  return datum;
}

BLDatum unbalanced_datum() {
  BLDatum datum;
  datum.r = {1};
  datum.c = {2.0};
  datum.d = {1.0};
  datum.maps = {Eigen::MatrixXd::Identity(1, 1)};
  return datum;
}

BLDatum zamir_feder_datum(const Eigen::MatrixXd& A, std::vector<double> d) {
  if (A.rows() < 1 || A.cols() < 1) {
    throw ParameterError("zamir_feder_datum: empty map");
  }
  BLDatum datum;
  datum.r.assign(A.cols(), 1);
  datum.c.assign(A.cols(), 1.0);
  datum.d = std::move(d);
  datum.maps = {A};
  if (datum.d.size() != 1) {
    throw ParameterError("zamir_feder_datum: expects a single d exponent");
  }
  return datum;
}

}  // namespace blepi
