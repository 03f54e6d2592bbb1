#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "maslov/errors.hpp"
#include "maslov/quadrature.hpp"
#include "maslov/rng.hpp"
#include "maslov/spinor.hpp"

namespace m = maslov;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

m::SymmetricForm scalar_form(double a) {
  Eigen::MatrixXd mat(1, 1);
  mat << a;
  return m::SymmetricForm(mat);
}

m::SymmetricForm diag_form(double a, double b) {
  Eigen::MatrixXd mat = Eigen::Vector2d(a, b).asDiagonal();
  return m::SymmetricForm(mat);
}
}  // namespace

TEST_CASE("closed-form quadratic integrals at pinned values") {
  const m::FresnelResult unit = m::fresnel_gaussian(scalar_form(1.0));
  const double root_pi = std::sqrt(kPi);
  CHECK(unit.value.real() == doctest::Approx(root_pi).epsilon(1e-15));
  CHECK(unit.value.imag() == doctest::Approx(-root_pi).epsilon(1e-15));
  CHECK(std::abs(unit.value) ==
        doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-15));
  CHECK(unit.abs_det == 1.0);
  CHECK(unit.signature == 1);

  const m::FresnelResult neg = m::fresnel_gaussian(scalar_form(-4.0));
  CHECK(neg.abs_det == 4.0);
  CHECK(neg.signature == -1);
  CHECK(std::abs(neg.value) ==
        doctest::Approx(std::sqrt(2.0 * kPi) / 2.0).epsilon(1e-15));
  CHECK(std::arg(neg.value) == doctest::Approx(kPi / 4.0).epsilon(1e-15));

  const m::FresnelResult split = m::fresnel_gaussian(diag_form(1.0, -1.0));
  CHECK(split.signature == 0);
  CHECK(split.value.real() == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(std::abs(split.value.imag()) <= 1e-12);

  const m::FresnelResult plane = m::fresnel_gaussian(diag_form(1.0, 1.0));
  CHECK(plane.signature == 2);
  CHECK(plane.value.imag() == doctest::Approx(-2.0 * kPi).epsilon(1e-14));
  CHECK(std::abs(plane.value.real()) <= 1e-12);
}

TEST_CASE("singular forms are rejected rather than assigned a phase") {
  CHECK_THROWS_AS(m::fresnel_gaussian(diag_form(1.0, 0.0)), m::SingularForm);
  CHECK_THROWS_AS(m::fresnel_gaussian(scalar_form(0.0)), m::SingularForm);
}

TEST_CASE("the damped quadrature oracle reproduces the closed form") {
  const m::FresnelResult closed = m::fresnel_gaussian(scalar_form(1.0));
  const m::OracleResult oracle = m::fresnel_quadrature_oracle(scalar_form(1.0));
  CHECK(std::abs(oracle.value - closed.value) / std::abs(closed.value) <=
        1e-4);

  const m::OracleResult two = m::fresnel_quadrature_oracle(scalar_form(2.0));
  CHECK(std::abs(std::abs(two.value) - std::sqrt(kPi)) <= 1e-4 * std::sqrt(kPi));

  const m::FresnelResult closed2 = m::fresnel_gaussian(diag_form(1.0, 1.0));
  const m::OracleResult oracle2 =
      m::fresnel_quadrature_oracle(diag_form(1.0, 1.0));
  CHECK(std::abs(oracle2.value - closed2.value) / std::abs(closed2.value) <=
        1e-4);
}

TEST_CASE("evaluation values have the exact determinant modulus") {
  m::Rng rng(321);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 3;
    Eigen::MatrixXd raw = rng.gaussian_symmetric(n);
    raw += (raw.cwiseAbs().maxCoeff() + 1.0) *
           Eigen::MatrixXd::Identity(n, n);
    const m::SymmetricForm a(raw);
    const std::complex<double> c{0.3, -1.2};
    const std::complex<double> value = m::evaluate_phi(a, c);
    const double expected =
        std::abs(c) / std::sqrt(m::fresnel_gaussian(a).abs_det);
    CHECK(std::abs(value) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("the phase is locally constant where the signature is constant") {
  const std::complex<double> base_phase =
      m::evaluate_phi(diag_form(1.0, -2.0), {1.0, 0.0});
  for (double t : {0.01, 0.05, 0.1, 0.3}) {
    const std::complex<double> moved =
        m::evaluate_phi(diag_form(1.0 + t, -2.0 + t), {1.0, 0.0});
    CHECK(std::arg(moved) == doctest::Approx(std::arg(base_phase)).epsilon(1e-12));
  }
  const std::complex<double> crossed =
      m::evaluate_phi(diag_form(1.0, 2.0), {1.0, 0.0});
  CHECK(std::arg(crossed) !=
        doctest::Approx(std::arg(base_phase)).epsilon(1e-12));
}

TEST_CASE("graph spinors are annihilated by their lagrangian") {
  m::Rng rng(777);
  const int n = 2;
  for (int trial = 0; trial < 5; ++trial) {
    const m::SymmetricForm b(rng.gaussian_symmetric(n));
    const m::GaussianSpinor s = m::spinor_of_graph(b, {1.0, 0.5});
    CHECK(s.quad.mat() == m::kSpinorGraphSign * b.mat());
    std::vector<Eigen::VectorXd> points;
    for (int i = 0; i < 40; ++i) points.push_back(rng.gaussian_vector(n));
    for (int i = 0; i < 8; ++i) {
      const Eigen::VectorXd q = rng.gaussian_vector(n);
      const m::HeisenbergElement u{q, b.mat() * q, 0.0};
      CHECK(m::apply_sigma(u, s, points) <= 1e-10);
    }
    const m::HeisenbergElement off{rng.gaussian_vector(n),
                                   rng.gaussian_vector(n), 0.0};
    CHECK(m::apply_sigma(off, s, points) > 1e-4);
  }
}

TEST_CASE("the bracket of heisenberg elements is central") {
  const m::SymplecticSpace space(2);
  m::Rng rng(12);
  const m::HeisenbergElement u{rng.gaussian_vector(2), rng.gaussian_vector(2),
                               0.0};
  const m::HeisenbergElement w{rng.gaussian_vector(2), rng.gaussian_vector(2),
                               0.0};
  const m::HeisenbergElement bracket = m::heisenberg_bracket(u, w);
  CHECK(bracket.q_part.cwiseAbs().maxCoeff() == 0.0);
  CHECK(bracket.p_part.cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd uu(4), ww(4);
  uu << u.q_part, u.p_part;
  ww << w.q_part, w.p_part;
  CHECK(bracket.central == doctest::Approx(-space.omega(uu, ww)).epsilon(1e-14));
}

TEST_CASE("a forward transform recovers the momentum representation") {
  const double a = 1.5;
  const std::complex<double> c{0.8, 0.1};
  const m::GaussianSpinor position = m::psi(scalar_form(a), c);
  for (double xi : {0.0, 0.4, 1.1}) {
    const m::OracleResult transformed = m::forward_fourier_1d(position, xi);
    const std::complex<double> expected =
        c * std::exp(std::complex<double>(0.0, -0.5 * a * xi * xi));
    CHECK(std::abs(transformed.value - expected) <= 2e-3 * std::abs(c));
  }
}

TEST_CASE("order bookkeeping is exact for every supported dimension") {
  for (int n : {1, 2, 3, 8, 64}) {
    const m::FidOrder order = m::fid_order(n);
    CHECK(order.k_amp == m::Rational(-n, 2));
    CHECK(order.n_vars == n);
    CHECK(order.d_dim == n * (n + 1) / 2);
    CHECK(order.m == m::Rational(-static_cast<std::int64_t>(n) * (n + 1), 8));
    const m::Rational recomputed =
        order.k_amp +
        m::Rational(2 * order.n_vars - order.d_dim, 4);
    CHECK(order.m == recomputed);
  }
}

TEST_CASE("rational arithmetic normalizes and compares exactly") {
  CHECK(m::Rational(2, 4) == m::Rational(1, 2));
  CHECK(m::Rational(1, -2) == m::Rational(-1, 2));
  CHECK(m::Rational(1, 3) + m::Rational(1, 6) == m::Rational(1, 2));
  CHECK(m::Rational(3, 4) * m::Rational(2, 3) == m::Rational(1, 2));
  CHECK((m::Rational(1, 2) / m::Rational(3, 2)) == m::Rational(1, 3));
  CHECK(m::Rational(7).str() == "7");
  CHECK(m::Rational(-3, 8).str() == "-3/8");
  CHECK_THROWS_AS(m::Rational(1, 0), std::invalid_argument);
}
