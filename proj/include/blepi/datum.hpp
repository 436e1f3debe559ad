#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

// The inequality's data: block partition r, exponents c and d, and the
// family of surjective linear maps A_j. Immutable after construction.

namespace blepi {

struct BLDatum {
  std::vector<int> r;               // block dimensions r_1..r_k
  std::vector<double> c;            // block exponents c_1..c_k, >= 0
  std::vector<double> d;            // map exponents d_1..d_m, >= 0
  std::vector<Eigen::MatrixXd> maps;  // A_j of shape n_j x n

  int k() const { return static_cast<int>(r.size()); }
  int m() const { return static_cast<int>(maps.size()); }
  int n() const;
  int map_dim(int j) const { return static_cast<int>(maps[j].rows()); }

  // Sum c_i r_i - sum d_j n_j; zero is necessary for a finite constant.
  double balance() const;
};

struct ValidationReport {
  bool ok = false;
  double balance = 0.0;
  std::vector<int> rank_defects;      // indices j with rank(A_j) < n_j
  std::vector<std::string> messages;  // human-readable diagnostics
};

// Checks coefficient signs and full row rank of every map. Dimension
// mismatches between the maps and the partition are structural and throw
// ParameterError; everything else is reported.
ValidationReport validate_datum(const BLDatum& datum, double rank_tol = 1e-10);

// Built-in data used as fixtures throughout.
BLDatum identity_datum(int n);
BLDatum epi_datum(double lambda);      // lambda in (0,1)
BLDatum unbalanced_datum();
BLDatum zamir_feder_datum(const Eigen::MatrixXd& A, std::vector<double> d);

}  // namespace blepi
