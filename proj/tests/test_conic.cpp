#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "maslov/conic.hpp"
#include "maslov/errors.hpp"
#include "maslov/stratification.hpp"

namespace m = maslov;

TEST_CASE("the scalar cone point carries beta = minus v squared") {
  Eigen::MatrixXd zero(1, 1);
  zero << 0.0;
  const m::SymmetricForm a(zero);
  Eigen::VectorXd v(1);
  v << 1.3;
  CHECK(m::critical_set_test(a, v));
  const m::SPoint point = m::s_point(a, v);
  CHECK(point.beta().mat()(0, 0) == -(1.3 * 1.3));
  CHECK(point.phase_witness()(0) ==
        doctest::Approx(std::sqrt(2.0) * 1.3).epsilon(1e-15));
}

TEST_CASE("critical pairs require the vector to lie in the kernel") {
  const int n = 3;
  const m::SymmetricForm a = m::random_symmetric_with_nullity(n, 1, 55);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  int kernel_index = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
  const Eigen::VectorXd kernel = es.eigenvectors().col(kernel_index);
  const Eigen::VectorXd off =
      es.eigenvectors().col((kernel_index + 1) % n);

  CHECK(m::critical_set_test(a, kernel));
  CHECK(m::critical_set_test(a, 2.5 * kernel));
  CHECK_FALSE(m::critical_set_test(a, kernel + 0.5 * off));
  CHECK_FALSE(m::critical_set_test(a, Eigen::VectorXd::Zero(n)));
  CHECK_THROWS_AS(m::s_point(a, kernel + 0.5 * off), m::NotCritical);
}

TEST_CASE("the defining equations are cut out transversally") {
  for (int n : {1, 2, 4}) {
    const m::SymmetricForm a =
        m::random_symmetric_with_nullity(n, 1, 200 + n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
    int kernel_index = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
    const Eigen::VectorXd v = 1.7 * es.eigenvectors().col(kernel_index);
    const m::NondegeneracyResult r = m::nondegeneracy_check(a, v);
    CHECK(r.pass);
    CHECK(r.rank == n);
    CHECK(r.bound == doctest::Approx(v.norm() / std::sqrt(2.0)));
    CHECK(r.sigma_min >= r.bound);
  }
}

TEST_CASE("points are canonical and the fibre map is two to one") {
  const m::SymmetricForm a = m::random_symmetric_with_nullity(2, 1, 77);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  int kernel_index = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
  const Eigen::VectorXd v = es.eigenvectors().col(kernel_index);
  const m::SPoint plus = m::s_point(a, v);
  const m::SPoint minus = m::s_point(a, -v);
  CHECK((plus.v() - minus.v()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((plus.beta().mat() - minus.beta().mat()).cwiseAbs().maxCoeff() ==
        0.0);
  double first_nonzero = 0.0;
  for (int i = 0; i < plus.v().size(); ++i) {
    if (plus.v()(i) != 0.0) {
      first_nonzero = plus.v()(i);
      break;
    }
  }
  CHECK(first_nonzero > 0.0);
  CHECK((plus.beta().mat() + plus.v() * plus.v().transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("tangent frames of the cone are isotropic for the canonical form") {
  for (int n : {2, 3}) {
    const m::SymmetricForm a =
        m::random_symmetric_with_nullity(n, 1, 400 + n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
    int kernel_index = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&kernel_index);
    const m::SPoint point =
        m::s_point(a, es.eigenvectors().col(kernel_index));
    const m::TangencyReport report = m::lagrangian_tangency_check(point);
    CHECK(report.curve_count == n * (n + 1) / 2);
    CHECK(report.tangent_rank == n * (n + 1) / 2);
    CHECK(report.max_omega <= 1e-8);
  }
}
