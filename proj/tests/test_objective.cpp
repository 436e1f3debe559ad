#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "blepi/errors.hpp"
#include "blepi/matkernels.hpp"
#include "blepi/objective.hpp"
#include "oracles.hpp"

using namespace blepi;

namespace {

BlockPDMatrix scalar_blocks(double b1, double b2) {
  BlockPDMatrix B;
  B.blocks = {Eigen::MatrixXd::Constant(1, 1, b1),
              Eigen::MatrixXd::Constant(1, 1, b2)};
  return B;
}

}  // namespace

TEST_CASE("objective on fixed points") {
  // A = I, c = d = 1: the two terms cancel for any PD block.
  BLDatum id2 = identity_datum(2);
  BlockPDMatrix B;
  Eigen::MatrixXd block(2, 2);
  block << 5, 1, 1, 3;
  B.blocks = {block};
  CHECK(objective_value(id2, B) == doctest::Approx(0.0).epsilon(1e-14));

  const BLDatum epi = epi_datum(0.5);
  CHECK(objective_value(epi, scalar_blocks(1, 1)) == doctest::Approx(0.0));

  const double expected = 0.5 * (0.5 * std::log(4.0) - std::log(2.5));
  CHECK(objective_value(epi, scalar_blocks(1, 4)) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(objective_value(epi, scalar_blocks(1, 4)) ==
        doctest::Approx(-0.1115718).epsilon(1e-6));
}

TEST_CASE("objective errors") {
  const BLDatum epi = epi_datum(0.5);
  CHECK_THROWS_AS(objective_value(epi, scalar_blocks(1, -2)),
                  NotPositiveDefiniteError);

  BlockPDMatrix wrong;
  wrong.blocks = {Eigen::MatrixXd::Identity(2, 2)};
  CHECK_THROWS_AS(objective_value(epi, wrong), ParameterError);

  BLDatum id2 = identity_datum(2);
  Eigen::MatrixXd nb(2, 2);
  nb << 1, 0.5, 0.4999, 1;  // asymmetric beyond tolerance
  BlockPDMatrix asym;
  asym.blocks = {nb};
  CHECK_THROWS_AS(objective_value(id2, asym), ParameterError);
}

TEST_CASE("zero-coefficient terms drop out") {
  BLDatum datum = epi_datum(0.5);
  datum.d.push_back(0.0);
  Eigen::MatrixXd extra(1, 2);
  extra << 1, 0;
  datum.maps.push_back(extra);
  CHECK(objective_value(datum, scalar_blocks(1, 4)) ==
        doctest::Approx(objective_value(epi_datum(0.5), scalar_blocks(1, 4)))
            .epsilon(1e-15));

  datum.c[0] = 0.0;  // drops the log b1 term
  const double expected = 0.5 * (0.5 * std::log(4.0) - std::log(2.5));
  CHECK(objective_value(datum, scalar_blocks(1, 4)) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("gradient on fixed points") {
  BLDatum id2 = identity_datum(2);
  BlockSymMatrix g = gradient(id2, oracles::random_block_pd({2}, 11));
  CHECK(g.frobenius_norm() < 1e-14);

  const BLDatum epi = epi_datum(0.5);
  g = gradient(epi, scalar_blocks(1, 1));
  CHECK(std::abs(g.blocks[0](0, 0)) < 1e-15);
  CHECK(std::abs(g.blocks[1](0, 0)) < 1e-15);
}

TEST_CASE("gradient matches central finite differences") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BLDatum datum;
    datum.r = {2, 1};
    datum.c = {0.7, 1.1};
    datum.d = {0.9, 0.6};
    datum.maps = {oracles::random_matrix(2, 3, seed, 20),
                  oracles::random_matrix(1, 3, seed, 21)};
    const BlockPDMatrix B = oracles::random_block_pd({2, 1}, seed);

    const BlockSymMatrix analytic = gradient(datum, B);
    const BlockSymMatrix fd = oracles::fd_gradient(datum, B);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < analytic.blocks.size(); ++i) {
      num += (analytic.blocks[i] - fd.blocks[i]).squaredNorm();
      den += fd.blocks[i].squaredNorm();
    }
    CHECK(std::sqrt(num) / std::max(std::sqrt(den), 1e-8) < 1e-5);
  }
}

TEST_CASE("scale invariance defect vanishes") {
  const BLDatum epi = epi_datum(0.5);
  CHECK(std::abs(scale_invariance_defect(epi, scalar_blocks(1, 4), 10.0)) <
        1e-10);
  CHECK(scale_invariance_defect(epi, scalar_blocks(1, 4), 1.0) == 0.0);

  BlockPDMatrix one;
  one.blocks = {Eigen::MatrixXd::Constant(1, 1, 1.0)};
  CHECK(std::abs(scale_invariance_defect(unbalanced_datum(), one,
                                         std::exp(1.0))) < 1e-12);

  CHECK_THROWS_AS(scale_invariance_defect(epi, scalar_blocks(1, 4), 0.0),
                  ParameterError);
}

TEST_CASE("balanced objective is scaling invariant") {
  const BLDatum epi = epi_datum(0.25);
  const BlockPDMatrix B = scalar_blocks(0.8, 3.5);
  const double f = objective_value(epi, B);
  for (double t : {1e-3, 1.0, 1e3}) {
    CHECK(std::abs(objective_value(epi, B.scaled(t)) - f) < 1e-10);
  }
}

TEST_CASE("objective invariant under blockwise orthogonal conjugation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BLDatum datum;
    datum.r = {2, 2};
    datum.c = {0.8, 1.2};
    datum.d = {1.0};
    datum.maps = {oracles::random_matrix(2, 4, seed, 30)};
    BlockPDMatrix B = oracles::random_block_pd({2, 2}, seed);
    const double f = objective_value(datum, B);

    // Rotate the first block and the matching column block of the map.
    const Eigen::MatrixXd U =
        qr_pos_diag(oracles::random_matrix(2, 2, seed, 31)).Q1;
    BLDatum rotated = datum;
    rotated.maps[0].leftCols(2) = datum.maps[0].leftCols(2) * U;
    BlockPDMatrix Brot = B;
    Eigen::MatrixXd conj = U.transpose() * B.blocks[0] * U;
    Brot.blocks[0] = 0.5 * (conj + conj.transpose());

    CHECK(objective_value(rotated, Brot) == doctest::Approx(f).epsilon(1e-10));
  }
}
