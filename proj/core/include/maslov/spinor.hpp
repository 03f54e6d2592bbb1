#pragma once

#include <complex>
#include <vector>

#include "maslov/rational.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

enum class Rep { position, momentum };

// Pure symplectic spinor data: the half-density coeff * e^{i<x, quad x>/2}
// sqrt|dx|, with the quadratic form read on position coordinates x (over Q)
// or momentum coordinates xi (over L0) according to rep. The sqrt|dx| factor
// is implicit: canonical coordinates are fixed once and all values are
// scalars against that half-density.
struct GaussianSpinor {
  SymmetricForm quad;
  std::complex<double> coeff{0.0, 0.0};
  Rep rep = Rep::position;

  std::complex<double> eval(const Eigen::VectorXd& x) const;
};

// The representation acts by sigma(e_j) = -i d/dx_j, sigma(f_j) = x_j, and
// the central coordinate t by multiplication with i*t. With that action the
// spinor annihilated by every vector of graph(B) = span{e_j + sum_i B_ij f_i}
// carries the quadratic form kSpinorGraphSign * B: sigma(q, Bq) applied to
// e^{i<x, Sx>/2} leaves ((S + B) q)^T x, which vanishes exactly for S = -B.
inline constexpr int kSpinorGraphSign = -1;

struct HeisenbergElement {
  Eigen::VectorXd q_part;
  Eigen::VectorXd p_part;
  double central = 0.0;
};

// Central part of the bracket stores the real coefficient: [u, w] has
// central = -omega(u, w) and zero vector parts.
HeisenbergElement heisenberg_bracket(const HeisenbergElement& u,
                                     const HeisenbergElement& w);

// The spinor line of the graph lagrangian with frame [I; B].
GaussianSpinor spinor_of_graph(const SymmetricForm& b,
                               std::complex<double> coeff);

// Maximum over the sample points of |sigma(u) psi(x)| / (|psi(x)| * |u|),
// evaluated in closed form for the Gaussian family.
double apply_sigma(const HeisenbergElement& u, const GaussianSpinor& s,
                   const std::vector<Eigen::VectorXd>& points);

struct FresnelResult {
  std::complex<double> value{0.0, 0.0};
  double abs_det = 0.0;
  int signature = 0;
};

// Closed form of the Fresnel integral over R^n of e^{-i<A eta, eta>/2}:
// (2 pi)^{n/2} |det A|^{-1/2} e^{-(pi i/4) sgn A}.
FresnelResult fresnel_gaussian(const SymmetricForm& a);

struct OracleResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

// Damped-quadrature realization of the same integral: integrates
// e^{-i<A eta, eta>/2} e^{-eps |eta|^2 / 2} for each eps in the schedule and
// extrapolates to eps = 0. Supports n <= 2.
OracleResult fresnel_quadrature_oracle(
    const SymmetricForm& a,
    const std::vector<double>& eps_schedule = {1e-1, 1e-2, 1e-3},
    double rel_gate = 1e-3);

// Chart trivialization: the position-rep spinor with quad = A^{-1} and
// coeff = c |det A|^{-1/2} e^{-(pi i/4) sgn A}.
GaussianSpinor psi(const SymmetricForm& a, std::complex<double> c);

// Evaluation distribution on the regular set: psi(A, c).coeff.
std::complex<double> evaluate_phi(const SymmetricForm& a,
                                  std::complex<double> c);

// Polar-coordinate oscillatory realization of evaluate_phi(A, 1): the
// integral of e^{-i s <A theta, theta>/2} s^{n/2 - 1} over the sphere and
// s in (0, inf), split by a smooth cutoff at scale cutoff_scale into a
// compact part (direct quadrature) and a damped extrapolated tail, carrying
// the (1/2) (2 pi)^{-n/2} normalization. Supports n <= 2.
std::complex<double> oscillatory_phi_oracle(const SymmetricForm& a,
                                            double cutoff_scale,
                                            double rel_gate = 1e-3);

// Forward transform (2 pi)^{-1/2} integral of psi(x) e^{-i x xi} dx at a
// single frequency, by damped quadrature; n = 1, position rep.
OracleResult forward_fourier_1d(
    const GaussianSpinor& s, double xi,
    const std::vector<double>& eps_schedule = {1e-1, 1e-2, 1e-3});

struct FidOrder {
  Rational m;
  Rational k_amp;
  int n_vars = 0;
  int d_dim = 0;
};

// Order bookkeeping of the Fourier integral distribution: amplitude order
// k = -n/2, N = n fibre variables, d = n(n+1)/2 base dimensions, and
// m = k + (2N - d)/4 = -n(n+1)/8 in exact rational arithmetic.
FidOrder fid_order(int n);

}  // namespace maslov
