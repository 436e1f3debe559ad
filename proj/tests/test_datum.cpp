#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "blepi/datum.hpp"
#include "blepi/errors.hpp"

using namespace blepi;

TEST_CASE("identity datum validates with zero balance") {
  const BLDatum datum = identity_datum(2);
  const ValidationReport report = validate_datum(datum);
  CHECK(report.ok);
  CHECK(report.balance == 0.0);
  CHECK(report.rank_defects.empty());

  CHECK(validate_datum(identity_datum(3)).balance == 0.0);
}

TEST_CASE("epi datum") {
  const BLDatum datum = epi_datum(0.5);
  CHECK(datum.maps[0](0, 0) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(datum.maps[0](0, 1) == doctest::Approx(0.70710678).epsilon(1e-8));
  const ValidationReport report = validate_datum(datum);
  CHECK(report.ok);
  CHECK(report.balance == 0.0);

  // c sums to one exactly even for binary-inexact lambda
  CHECK(validate_datum(epi_datum(0.9)).balance == 0.0);
  CHECK(validate_datum(epi_datum(0.25)).balance == 0.0);

  CHECK_THROWS_AS(epi_datum(0.0), ParameterError);
  CHECK_THROWS_AS(epi_datum(1.0), ParameterError);
  CHECK_THROWS_AS(epi_datum(-2.0), ParameterError);
}

TEST_CASE("unbalanced datum reports balance 1") {
  const ValidationReport report = validate_datum(unbalanced_datum());
  CHECK(report.ok);  // validation is not finiteness
  CHECK(report.balance == 1.0);
}

TEST_CASE("zero map is flagged as rank defect") {
  BLDatum datum;
  datum.r = {1, 1};
  datum.c = {1.0, 1.0};
  datum.d = {2.0};
  datum.maps = {Eigen::MatrixXd::Zero(1, 2)};
  const ValidationReport report = validate_datum(datum);
  CHECK_FALSE(report.ok);
  REQUIRE(report.rank_defects.size() == 1);
  CHECK(report.rank_defects[0] == 0);
}

TEST_CASE("negative coefficients fail validation but are not structural") {
  BLDatum datum = epi_datum(0.5);
  datum.c[0] = -0.5;
  const ValidationReport report = validate_datum(datum);
  CHECK_FALSE(report.ok);
  CHECK(report.rank_defects.empty());
  CHECK_FALSE(report.messages.empty());
}

TEST_CASE("dimension mismatch is a structural error") {
  BLDatum datum = epi_datum(0.5);
  datum.maps[0] = Eigen::MatrixXd::Ones(1, 3);  // n = 2
  CHECK_THROWS_AS(validate_datum(datum), ParameterError);

  BLDatum bad_r = identity_datum(2);
  bad_r.r = {0};
  CHECK_THROWS_AS(validate_datum(bad_r), ParameterError);

  BLDatum short_c = identity_datum(2);
  short_c.c = {};
  CHECK_THROWS_AS(validate_datum(short_c), ParameterError);
}

TEST_CASE("validation is invariant under permuting (d_j, A_j) pairs") {
  BLDatum datum;
  datum.r = {1, 1};
  datum.c = {1.0, 1.0};
  datum.d = {0.5, 1.5};
  Eigen::MatrixXd A0(1, 2), A1(1, 2);
  A0 << 1, 0;
  A1 << 1, 1;
  datum.maps = {A0, A1};
  const ValidationReport before = validate_datum(datum);

  std::swap(datum.d[0], datum.d[1]);
  std::swap(datum.maps[0], datum.maps[1]);
  const ValidationReport after = validate_datum(datum);

  CHECK(before.ok == after.ok);
  CHECK(before.balance == after.balance);
}

TEST_CASE("zamir_feder datum shape") {
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  const BLDatum datum = zamir_feder_datum(A, {2.0});
  CHECK(datum.k() == 2);
  CHECK(datum.r == std::vector<int>{1, 1});
  CHECK(datum.c == std::vector<double>{1.0, 1.0});
  const ValidationReport report = validate_datum(datum);
  CHECK(report.ok);
  CHECK(report.balance == 0.0);

  // d = 1 leaves the datum unbalanced; the caller owns that choice
  CHECK(validate_datum(zamir_feder_datum(A, {1.0})).balance == 1.0);
}

TEST_CASE("zero coefficients are allowed") {
  BLDatum datum = epi_datum(0.5);
  datum.c = {0.0, 1.0};
  const ValidationReport report = validate_datum(datum);
  CHECK(report.ok);
}
