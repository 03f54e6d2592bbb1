#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "maslov/errors.hpp"

namespace maslov {

using ComplexIntegrand = std::function<std::complex<double>(double)>;

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_intervals = 20000;  // bisections before giving up
};

// Globally adaptive Gauss-Kronrod 7/15 quadrature over [a, b]; the worst
// interval is bisected until the summed error estimate meets the tolerance.
std::complex<double> integrate(const ComplexIntegrand& f, double a, double b,
                               const QuadratureOptions& opts = {});

struct QuadratureResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;  // summed Gauss-Kronrod error estimate at termination
  long evaluations = 0;
};

// Same algorithm as integrate, reporting the residual error estimate and the
// number of integrand evaluations.
QuadratureResult integrate_with_error(const ComplexIntegrand& f, double a,
                                      double b,
                                      const QuadratureOptions& opts = {});

struct ExtrapolationResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;  // |last diagonal - previous diagonal|
};

// Neville extrapolation of g(eps) to eps = 0 from samples at the given
// (distinct, positive) nodes.
ExtrapolationResult richardson_extrapolate(
    const std::vector<double>& eps,
    const std::vector<std::complex<double>>& values);

// C-infinity step: 1 on (-inf, 1], 0 on [2, inf), strictly decreasing in
// between.
double smooth_cutoff(double u);

}  // namespace maslov
