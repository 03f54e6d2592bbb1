#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "maslov/errors.hpp"
#include "maslov/rng.hpp"
#include "maslov/symplectic.hpp"

namespace m = maslov;

TEST_CASE("canonical form pairs the two distinguished lagrangians") {
  const m::SymplecticSpace space(3);
  const Eigen::MatrixXd& j = space.J();
  CHECK((j + j.transpose()).norm() == 0.0);
  CHECK((j * j + Eigen::MatrixXd::Identity(6, 6)).norm() == 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(6);
      Eigen::VectorXd f = Eigen::VectorXd::Zero(6);
      Eigen::VectorXd e2 = Eigen::VectorXd::Zero(6);
      e(i) = 1.0;
      f(3 + k) = 1.0;
      e2(k) = 1.0;
      CHECK(space.omega(e, f) == (i == k ? 1.0 : 0.0));
      CHECK(space.omega(e, e2) == 0.0);
    }
  }
}

TEST_CASE("distinguished frames are lagrangian and transversal") {
  for (int n : {1, 2, 4}) {
    const m::SymplecticSpace space(n);
    const m::LagrangianFrame q = m::q_frame(space);
    const m::LagrangianFrame l0 = m::l0_frame(space);
    CHECK(m::is_lagrangian(q, space));
    CHECK(m::is_lagrangian(l0, space));
    CHECK(m::intersection_dim(q, l0) == 0);
    CHECK(m::intersection_dim(q, q) == n);
  }
}

TEST_CASE("symmetric forms are symmetrized exactly") {
  Eigen::MatrixXd raw(2, 2);
  raw << 1.0, 0.3, 0.7, -2.0;
  const m::SymmetricForm a(raw);
  CHECK(a.mat()(0, 1) == a.mat()(1, 0));
  CHECK(a.mat()(0, 1) == 0.5 * (0.3 + 0.7));
}

TEST_CASE("graphs over the horizontal lagrangian read back their form") {
  const m::SymplecticSpace space(3);
  for (std::uint64_t seed : {3u, 17u, 99u}) {
    m::Rng rng(seed);
    const m::SymmetricForm b(rng.gaussian_symmetric(3));
    const m::LagrangianFrame l = m::graph_over_q(space, b);
    CHECK(m::is_lagrangian(l, space));
    const m::SymmetricForm back = m::chart_coords(l, m::chart_over_q(space));
    CHECK((back.mat() - b.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("graph coordinates over the two charts are negative inverses") {
  Eigen::MatrixXd braw(2, 2);
  braw << 0.5, 0.25, 0.25, 1.5;
  const m::SymmetricForm b(braw);
  const m::SymplecticSpace space(2);
  const m::LagrangianFrame l = m::graph_over_q(space, b);
  const m::SymmetricForm dual = m::chart_coords(l, m::chart_over_l0(space));
  const Eigen::MatrixXd expected = -braw.inverse();
  CHECK((dual.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);
  const m::LagrangianFrame rebuilt =
      m::graph_from_symmetric(dual, m::chart_over_l0(space));
  CHECK(m::subspace_equal(rebuilt, l));
}

TEST_CASE("chart coordinates require transversality to the complement") {
  const m::SymplecticSpace space(2);
  CHECK_THROWS_AS(m::chart_coords(m::l0_frame(space), m::chart_over_q(space)),
                  m::NotTransversal);
  const m::SymmetricForm zero =
      m::chart_coords(m::l0_frame(space), m::chart_over_l0(space));
  CHECK(zero.mat().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("seeded random lagrangians are lagrangian and reproducible") {
  const m::SymplecticSpace space(3);
  const m::LagrangianFrame a = m::random_lagrangian(space, 42);
  const m::LagrangianFrame b = m::random_lagrangian(space, 42);
  const m::LagrangianFrame c = m::random_lagrangian(space, 43);
  CHECK(m::is_lagrangian(a, space));
  CHECK((a.columns() - b.columns()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(m::subspace_equal(a, c));
}

TEST_CASE("common transversals and transversal complements exist") {
  const m::SymplecticSpace space(2);
  const m::LagrangianFrame l1 = m::random_lagrangian(space, 7);
  const m::LagrangianFrame l2 = m::random_lagrangian(space, 8);
  const m::LagrangianFrame t = m::find_common_transversal(space, l1, l2);
  CHECK(m::is_lagrangian(t, space));
  CHECK(m::intersection_dim(t, l1) == 0);
  CHECK(m::intersection_dim(t, l2) == 0);
  const m::LagrangianFrame c =
      m::find_transversal_complement(space, {&l1, &l2});
  CHECK(m::intersection_dim(c, l1) == 0);
  CHECK(m::intersection_dim(c, l2) == 0);
}

TEST_CASE("complement change on the scalar chart flips the sign") {
  const m::SymplecticSpace space(1);
  const m::Chart chart = m::chart_over_q(space);
  const double b = 0.75;
  Eigen::MatrixXd ncols(2, 1);
  ncols << b, 1.0;
  const m::LagrangianFrame nprime(ncols, 1e-9);
  const m::SymmetricForm bmat = m::b_matrix(chart, nprime);
  CHECK(bmat.mat()(0, 0) == doctest::Approx(-b).epsilon(1e-12));
}

TEST_CASE("complement change follows the transition formula") {
  const m::SymplecticSpace space(2);
  m::Rng rng(2024);
  const m::SymmetricForm shape(rng.gaussian_symmetric(2));
  const m::LagrangianFrame l = m::graph_over_q(space, shape);
  const m::Chart chart1 = m::chart_over_q(space);

  Eigen::MatrixXd craw(2, 2);
  craw << 0.2, -0.1, -0.1, 0.4;
  Eigen::MatrixXd ncols(4, 2);
  ncols.topRows(2) = craw;
  ncols.bottomRows(2) = Eigen::MatrixXd::Identity(2, 2);
  const m::LagrangianFrame nprime(ncols, 1e-9);
  const m::Chart chart2(space, m::q_frame(space), nprime);

  const m::SymmetricForm a1 = m::chart_coords(l, chart1);
  const m::SymmetricForm a2 = m::chart_coords(l, chart2);
  const m::SymmetricForm b = m::b_matrix(chart1, nprime);
  const m::SymmetricForm moved = m::transition(a1, b);
  CHECK((moved.mat() - a2.mat()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("transition reports a singular complement change") {
  Eigen::MatrixXd araw(1, 1), braw(1, 1);
  araw << 2.0;
  braw << -0.5;
  CHECK_THROWS_AS(
      m::transition(m::SymmetricForm(araw), m::SymmetricForm(braw)),
      m::SingularTransition);
}

TEST_CASE("intersection dimension counts planted overlaps") {
  const m::SymplecticSpace space(3);
  const m::LagrangianFrame l0 = m::l0_frame(space);
  Eigen::MatrixXd cols(6, 3);
  cols.setZero();
  cols(3, 0) = 1.0;
  cols(1, 1) = 1.0;
  cols(2, 2) = 1.0;
  const m::LagrangianFrame mixed(cols, 1e-9);
  CHECK(m::is_lagrangian(mixed, space));
  CHECK(m::intersection_dim(mixed, l0) == 1);
}

TEST_CASE("frames reject rank-deficient columns") {
  Eigen::MatrixXd cols(4, 2);
  cols.setZero();
  cols(0, 0) = 1.0;
  cols(0, 1) = 2.0;
  CHECK_THROWS_AS(m::LagrangianFrame(cols, 1e-9), m::InputError);
}
