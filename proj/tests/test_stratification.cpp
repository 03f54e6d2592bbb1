#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "maslov/errors.hpp"
#include "maslov/rng.hpp"
#include "maslov/stratification.hpp"
#include "maslov/symplectic.hpp"

namespace m = maslov;

TEST_CASE("stratum labels count the intersection with the vertical") {
  for (int n : {1, 2, 3}) {
    const m::SymplecticSpace space(n);
    const m::LagrangianFrame l0 = m::l0_frame(space);
    const m::StratumLabel top = m::stratum_of(l0, l0);
    CHECK(top.k == n);
    CHECK(top.codim == n * (n + 1) / 2);
    const m::StratumLabel open_stratum = m::stratum_of(m::q_frame(space), l0);
    CHECK(open_stratum.k == 0);
    CHECK(open_stratum.codim == 0);
  }
}

TEST_CASE("planted nullity is reproduced by rank, minors, and signature") {
  for (int n : {2, 4}) {
    for (int k = 0; k <= n; ++k) {
      const m::SymmetricForm a =
          m::random_symmetric_with_nullity(n, k, 100 + 10 * n + k);
      CHECK(m::nullity(a) == k);
      CHECK(m::minor_test(a, k));
      if (k < n) CHECK_FALSE(m::minor_test(a, k + 1));
      CHECK((n - std::abs(m::signature(a))) % 2 == k % 2);
    }
  }
}

TEST_CASE("signature of an explicit diagonal form") {
  Eigen::MatrixXd d = Eigen::Vector3d(2.0, -3.0, 5.0).asDiagonal();
  CHECK(m::signature(m::SymmetricForm(d)) == 1);
  CHECK(m::nullity(m::SymmetricForm(d)) == 0);
}

TEST_CASE("conormal elements span the symmetric square of the kernel") {
  const int n = 3;
  const m::SymplecticSpace space(n);
  const m::LagrangianFrame l0 = m::l0_frame(space);
  const m::Chart chart = m::chart_over_l0(space);
  for (int k : {1, 2, 3}) {
    const m::SymmetricForm a = m::random_symmetric_with_nullity(n, k, 7 + k);
    const m::LagrangianFrame l = m::graph_from_symmetric(a, chart);
    CHECK(m::stratum_of(l, l0).k == k);
    const std::vector<m::ConormalElement> conormal =
        m::conormal_spanning_set(l, l0, chart);
    CHECK(static_cast<int>(conormal.size()) == k * (k + 1) / 2);
    Eigen::MatrixXd flattened(conormal.size(), n * n);
    for (std::size_t i = 0; i < conormal.size(); ++i) {
      const Eigen::MatrixXd& beta = conormal[i].beta.mat();
      CHECK((beta + conormal[i].v * conormal[i].v.transpose())
                .cwiseAbs()
                .maxCoeff() == 0.0);
      flattened.row(i) =
          Eigen::Map<const Eigen::VectorXd>(beta.data(), n * n).transpose();
    }
    CHECK(m::matrix_rank(flattened) == k * (k + 1) / 2);
  }
}

TEST_CASE("conormal data requires a nonempty intersection") {
  const m::SymplecticSpace space(2);
  const m::SymmetricForm invertible = m::random_symmetric_with_nullity(2, 0, 3);
  const m::LagrangianFrame transversal =
      m::graph_from_symmetric(invertible, m::chart_over_l0(space));
  CHECK_THROWS_AS(m::conormal_spanning_set(transversal, m::l0_frame(space),
                                           m::chart_over_l0(space)),
                  m::EmptyIntersection);
}

TEST_CASE("the calibration loop has index plus one") {
  const m::GrassmannPath loop = m::calibration_loop(81);
  const m::SymplecticSpace space(1);
  const m::MaslovIndexResult r = m::maslov_index(loop, m::l0_frame(space));
  CHECK(r.index == 1);
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].k == 1);
  CHECK(r.crossings[0].signature_jump == 2);
  CHECK(r.crossings[0].t == doctest::Approx(1.5707963267948966).epsilon(1e-8));
  CHECK(m::winding_oracle(loop) == 1);
}

TEST_CASE("unitary loops wind by the sum of their speeds") {
  const m::SymplecticSpace space(2);
  const std::vector<std::vector<int>> speed_sets = {
      {1, 0}, {1, -2}, {2, 2}, {-1, -1}};
  for (std::size_t i = 0; i < speed_sets.size(); ++i) {
    const m::GrassmannPath loop =
        m::unitary_loop(space, 900 + i, speed_sets[i], 96);
    int expected = 0;
    for (int k : speed_sets[i]) expected += k;
    CHECK(m::winding_oracle(loop) == expected);
    const m::MaslovIndexResult r = m::maslov_index(loop, m::l0_frame(space));
    CHECK(r.index == expected);
  }
}

TEST_CASE("the index is invariant under sample doubling") {
  const m::SymplecticSpace space(2);
  const std::vector<int> speeds = {2, -1};
  const m::GrassmannPath coarse = m::unitary_loop(space, 31, speeds, 64);
  const m::GrassmannPath fine = m::unitary_loop(space, 31, speeds, 127);
  const m::LagrangianFrame l0 = m::l0_frame(space);
  CHECK(m::maslov_index(coarse, l0).index == m::maslov_index(fine, l0).index);
}

TEST_CASE("open paths must not start or end on the cycle") {
  const m::SymplecticSpace space(1);
  std::vector<double> t;
  std::vector<m::LagrangianFrame> frames;
  for (int i = 0; i <= 8; ++i) {
    const double angle = 1.5707963267948966 + 1.2 * i / 8.0;
    Eigen::MatrixXd cols(2, 1);
    cols << std::cos(angle), std::sin(angle);
    t.push_back(static_cast<double>(i));
    frames.emplace_back(cols, 1e-9);
  }
  const m::GrassmannPath path(t, frames, false);
  CHECK_THROWS_AS(m::maslov_index(path, m::l0_frame(space)),
                  m::EndpointOnCycle);
}

TEST_CASE("path construction validates its samples") {
  const m::SymplecticSpace space(1);
  Eigen::MatrixXd cols(2, 1);
  cols << 1.0, 0.0;
  const m::LagrangianFrame f(cols, 1e-9);
  CHECK_THROWS_AS(m::GrassmannPath({0.0}, {f}, false), m::InputError);
  CHECK_THROWS_AS(m::GrassmannPath({0.0, 0.0}, {f, f}, false), m::InputError);
  Eigen::MatrixXd other(2, 1);
  other << 0.0, 1.0;
  const m::LagrangianFrame g(other, 1e-9);
  CHECK_THROWS_AS(m::GrassmannPath({0.0, 1.0}, {f, g}, true), m::InputError);
}
