#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "maslov/errors.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

// All integrals over symmetric matrices use Lebesgue measure in
// Frobenius-isometric coordinates (diagonal entries plus sqrt(2)-scaled
// off-diagonal entries), so shells are rounds balls of the Frobenius norm.
enum class EstimateMethod {
  analytic,
  deterministic_quadrature,
  monte_carlo_median_of_means,
};

std::string method_name(EstimateMethod m);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateMethod method = EstimateMethod::analytic;
  long samples = 0;
  std::uint64_t seed = 0;
};

struct EstimatorConfig {
  std::uint64_t seed = 0x6d61736c6f76ULL;
  int groups = 32;
  long samples_n3 = 1000000;
  long samples_n4 = 4000000;
  int max_n = 4;
  bool force_mc = false;  // run the Monte Carlo path even when n <= 2
};

// Integral of |det A|^{-1/2} over the Frobenius shell r_in <= |A|_F <= r_out
// in Sym(n). Analytic at n = 1, deterministic quadrature via the eigenvalue
// reduction at n = 2, median-of-means Monte Carlo at n in {3, 4}.
IntegralEstimate annulus_integral(int n, double r_in, double r_out,
                                  const EstimatorConfig& cfg = {});

struct ScalingRatioResult {
  double measured = 0.0;
  double predicted = 0.0;
  double std_error = 0.0;
  bool pass = false;
};

// Ratio annulus(n, 1/4, 1/2) / annulus(n, 1/2, 1) against the homogeneity
// prediction 2^{-n^2/2}.
ScalingRatioResult scaling_ratio_test(int n, const EstimatorConfig& cfg = {});

// Geometric-series sum of the annuli filling the unit ball:
// annulus(n, 1/2, 1) / (1 - 2^{-n^2/2}).
IntegralEstimate ball_integral(int n, const EstimatorConfig& cfg = {});

enum class GrowthFamily {
  sigma1,  // diag(t, 1, ..., 1): one eigenvalue crosses, modulus ~ |t|^{-1/2}
  sigma2,  // diag(t, t, 1, ..., 1): two eigenvalues cross, modulus ~ |t|^{-1}
  offset,  // diag(1 + t, 1, ..., 1): no crossing in the window
};

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::vector<double> t;          // sampled |t - t*|
  std::vector<double> magnitude;  // |phi(A(t), 1)|
};

// Least-squares fit of log |phi| against log |t - t*| for the planted
// family, over a log-spaced window.
GrowthFit growth_exponent_fit(int n, GrowthFamily family = GrowthFamily::sigma1,
                              double window_lo = 1e-6, double window_hi = 1e-2,
                              int points = 25);

struct TestDensity {
  double amplitude = 0.25;
  double width = 0.3;
  double support = 0.9;        // Frobenius radius of the compact support
  double center_offset = 0.0;  // density centered at center_offset * I
};

struct PairingSample {
  double h = 0.0;
  std::complex<double> value{0.0, 0.0};
};

// Pairs phi against the test density by midpoint quadrature on cells of
// size h, excluding cells whose matrix lies within h of the cycle (distance
// = smallest absolute eigenvalue), for each mesh level. The sequence of
// values is Cauchy as h decreases, demonstrating local integrability.
std::vector<PairingSample> pairing_convergence_test(
    int n, const TestDensity& density, const std::vector<double>& levels);

}  // namespace maslov
