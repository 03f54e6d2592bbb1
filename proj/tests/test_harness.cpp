#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "maslov/errors.hpp"
#include "maslov/harness.hpp"

namespace m = maslov;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// Independent closed forms for the shell integrals of |det|^{-1/2}:
//   n = 1:  4 (sqrt(r_out) - sqrt(r_in))
//   n = 2:  (pi / sqrt(2)) W (r_out^2 - r_in^2) / 2 with the angular factor
//           W = 2 sqrt(2) (pi + 2 log(1 + sqrt(2))), which collapses to
//           pi (pi + 2 log(1 + sqrt(2))) (r_out^2 - r_in^2); the unit ball
//           evaluates to pi (pi + 2 log(1 + sqrt(2))).
double closed_form_annulus_2(double r_in, double r_out) {
  const double w = kPi + 2.0 * std::log(1.0 + std::sqrt(2.0));
  return kPi * w * (r_out * r_out - r_in * r_in);
}
}  // namespace

TEST_CASE("scalar shells integrate in closed form") {
  const m::IntegralEstimate e = m::annulus_integral(1, 0.25, 0.64);
  CHECK(e.method == m::EstimateMethod::analytic);
  CHECK(e.std_error == 0.0);
  CHECK(e.samples == 0);
  CHECK(e.value == doctest::Approx(4.0 * (0.8 - 0.5)).epsilon(1e-15));

  const m::IntegralEstimate half = m::annulus_integral(1, 0.5, 1.0);
  CHECK(half.value ==
        doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-15));

  const m::IntegralEstimate ball = m::ball_integral(1);
  CHECK(ball.value == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("planar shells match the eigenvalue-reduction closed form") {
  const m::IntegralEstimate e = m::annulus_integral(2, 0.5, 1.0);
  CHECK(e.method == m::EstimateMethod::deterministic_quadrature);
  CHECK(e.std_error > 0.0);
  CHECK(e.std_error < 1e-9);
  CHECK(e.samples > 0);
  const double closed = closed_form_annulus_2(0.5, 1.0);
  CHECK(closed == doctest::Approx(11.555578479890039).epsilon(1e-12));
  CHECK(e.value == doctest::Approx(closed).epsilon(1e-10));

  const m::IntegralEstimate ball = m::ball_integral(2);
  const double ball_closed =
      kPi * (kPi + 2.0 * std::log(1.0 + std::sqrt(2.0)));
  CHECK(ball.value == doctest::Approx(ball_closed).epsilon(1e-9));
}

TEST_CASE("deterministic shells scale exactly under dilation") {
  const m::IntegralEstimate big = m::annulus_integral(2, 0.5, 1.0);
  const m::IntegralEstimate small = m::annulus_integral(2, 0.25, 0.5);
  CHECK(small.value == 0.25 * big.value);
}

TEST_CASE("the scaling ratio matches the dimension-dependent power of two") {
  const m::ScalingRatioResult one = m::scaling_ratio_test(1);
  CHECK(one.pass);
  CHECK(one.predicted ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-15));
  CHECK(std::abs(one.measured - one.predicted) <= 1e-12);

  const m::ScalingRatioResult two = m::scaling_ratio_test(2);
  CHECK(two.pass);
  CHECK(two.predicted == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(two.measured - 0.25) <= 1e-12);
}

TEST_CASE("monte carlo shells agree with the closed form within three sigma") {
  m::EstimatorConfig cfg;
  cfg.force_mc = true;
  cfg.samples_n3 = 400000;
  const m::IntegralEstimate e = m::annulus_integral(2, 0.5, 1.0, cfg);
  CHECK(e.method == m::EstimateMethod::monte_carlo_median_of_means);
  CHECK(e.std_error > 0.0);
  CHECK(e.samples == 400000);
  const double closed = closed_form_annulus_2(0.5, 1.0);
  CHECK(std::abs(e.value - closed) <= 3.0 * e.std_error);
  CHECK(e.std_error <= 0.02 * closed);
}

TEST_CASE("monte carlo estimates are reproducible bit for bit") {
  m::EstimatorConfig cfg;
  cfg.samples_n3 = 120000;
  const m::IntegralEstimate a = m::annulus_integral(3, 0.5, 1.0, cfg);
  const m::IntegralEstimate b = m::annulus_integral(3, 0.5, 1.0, cfg);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  CHECK(a.method == m::EstimateMethod::monte_carlo_median_of_means);

  m::EstimatorConfig other = cfg;
  other.seed = cfg.seed + 1;
  const m::IntegralEstimate c = m::annulus_integral(3, 0.5, 1.0, other);
  CHECK(c.value != a.value);
  CHECK(std::abs(c.value - a.value) <=
        4.0 * std::hypot(a.std_error, c.std_error));
}

TEST_CASE("three dimensional shells pass the scaling law within noise") {
  m::EstimatorConfig cfg;
  cfg.samples_n3 = 200000;
  const m::ScalingRatioResult r = m::scaling_ratio_test(3, cfg);
  CHECK(r.pass);
  CHECK(r.predicted == doctest::Approx(std::pow(2.0, -4.5)).epsilon(1e-15));
  CHECK(r.std_error > 0.0);
  CHECK(std::abs(r.measured - r.predicted) <= 3.0 * r.std_error);
}

TEST_CASE("shell parameters are validated") {
  CHECK_THROWS_AS(m::annulus_integral(0, 0.5, 1.0), m::InputError);
  CHECK_THROWS_AS(m::annulus_integral(2, -0.1, 1.0), m::InputError);
  CHECK_THROWS_AS(m::annulus_integral(2, 1.0, 1.0), m::InputError);
  CHECK_THROWS_AS(m::annulus_integral(2, 1.0, 0.5), m::InputError);
  CHECK_THROWS_AS(m::annulus_integral(5, 0.5, 1.0), m::UnsupportedDim);
}

TEST_CASE("growth exponents recover the inverse square root law") {
  for (int n : {1, 2, 3}) {
    const m::GrowthFit fit = m::growth_exponent_fit(n);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(fit.r_squared >= 0.9999);
    CHECK(fit.t.size() == 25);
    CHECK(fit.magnitude.size() == fit.t.size());
  }
  const m::GrowthFit corank2 =
      m::growth_exponent_fit(2, m::GrowthFamily::sigma2);
  CHECK(corank2.slope == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(corank2.r_squared >= 0.9999);
}

TEST_CASE("windows away from the cycle fail the power-law fit") {
  const m::GrowthFit off = m::growth_exponent_fit(2, m::GrowthFamily::offset);
  CHECK(off.r_squared < 0.999);
  CHECK(std::abs(off.slope) < 0.01);
}

TEST_CASE("degenerate fit windows are rejected") {
  CHECK_THROWS_AS(
      m::growth_exponent_fit(1, m::GrowthFamily::sigma1, 1e-6, 1e-2, 5),
      m::BadWindow);
  CHECK_THROWS_AS(m::growth_exponent_fit(1, m::GrowthFamily::sigma2),
                  m::InputError);
}

TEST_CASE("pairings against a test density form a cauchy sequence") {
  std::vector<double> levels;
  for (int j = 8; j <= 17; ++j) levels.push_back(std::pow(2.0, -j));
  const std::vector<m::PairingSample> seq =
      m::pairing_convergence_test(1, m::TestDensity{}, levels);
  REQUIRE(seq.size() == levels.size());
  const double final_diff =
      std::abs(seq[seq.size() - 1].value - seq[seq.size() - 2].value);
  const double early_diff = std::abs(seq[1].value - seq[0].value);
  CHECK(final_diff < 1e-4);
  CHECK(final_diff < 0.1 * early_diff);
}

TEST_CASE("planar pairings converge as the mesh refines") {
  std::vector<double> levels;
  for (int j = 3; j <= 8; ++j) levels.push_back(std::pow(2.0, -j));
  const std::vector<m::PairingSample> seq =
      m::pairing_convergence_test(2, m::TestDensity{}, levels);
  REQUIRE(seq.size() == levels.size());
  std::vector<double> diffs;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    diffs.push_back(std::abs(seq[i].value - seq[i - 1].value));
  }
  CHECK(diffs.back() < diffs.front());
  CHECK(diffs.back() < 0.025);
}

TEST_CASE("pairing dimensions beyond the grid are rejected") {
  CHECK_THROWS_AS(
      m::pairing_convergence_test(3, m::TestDensity{}, {0.25, 0.125}),
      m::UnsupportedDim);
}
