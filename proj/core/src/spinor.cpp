#include "maslov/spinor.hpp"

#include <cmath>

#include "maslov/quadrature.hpp"

namespace maslov {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SpectralData {
  double abs_det = 1.0;
  int signature = 0;
  Eigen::MatrixXd inverse;
};

// Eigenvalue-based determinant, signature, and inverse, rejecting forms with
// an eigenvalue inside the tolerance band around zero.
SpectralData spectral_or_throw(const SymmetricForm& a, bool want_inverse) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = kRankTolerance * ev.cwiseAbs().maxCoeff() * a.n();
  SpectralData out;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= cut) {
      throw SingularForm("quadratic form has an eigenvalue at zero");
    }
    out.abs_det *= std::abs(ev[i]);
    out.signature += (ev[i] > 0.0) ? 1 : -1;
  }
  if (want_inverse) {
    out.inverse = es.eigenvectors() *
                  ev.cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose();
  }
  return out;
}

double tail_radius(double eps) {
  // e^{-eps R^2 / 2} <= 1e-10 keeps the truncated damped tail below 1e-8.
  return std::sqrt(2.0 * std::log(1e10) / eps);
}

std::complex<double> unit_phase(int signature) {
  return std::polar(1.0, -0.25 * kPi * signature);
}

}  // namespace

std::complex<double> GaussianSpinor::eval(const Eigen::VectorXd& x) const {
  if (x.size() != quad.n()) throw InputError("GaussianSpinor: dimension mismatch");
  const double phase = 0.5 * x.dot(quad.mat() * x);
  return coeff * std::polar(1.0, phase);
}

HeisenbergElement heisenberg_bracket(const HeisenbergElement& u,
                                     const HeisenbergElement& w) {
  if (u.q_part.size() != w.q_part.size() ||
      u.p_part.size() != w.p_part.size() ||
      u.q_part.size() != u.p_part.size()) {
    throw InputError("heisenberg_bracket: dimension mismatch");
  }
  HeisenbergElement out;
  out.q_part = Eigen::VectorXd::Zero(u.q_part.size());
  out.p_part = Eigen::VectorXd::Zero(u.p_part.size());
  const double omega = u.q_part.dot(w.p_part) - u.p_part.dot(w.q_part);
  out.central = -omega;
  return out;
}

GaussianSpinor spinor_of_graph(const SymmetricForm& b,
                               std::complex<double> coeff) {
  GaussianSpinor out;
  out.quad = SymmetricForm(kSpinorGraphSign * b.mat());
  out.coeff = coeff;
  out.rep = Rep::position;
  return out;
}

double apply_sigma(const HeisenbergElement& u, const GaussianSpinor& s,
                   const std::vector<Eigen::VectorXd>& points) {
  if (s.rep != Rep::position) {
    throw InputError("apply_sigma: spinor must be in position rep");
  }
  const int n = s.quad.n();
  if (u.q_part.size() != n || u.p_part.size() != n) {
    throw InputError("apply_sigma: dimension mismatch");
  }
  const double norm = std::sqrt(u.q_part.squaredNorm() + u.p_part.squaredNorm() +
                                u.central * u.central);
  if (norm == 0.0 || s.coeff == std::complex<double>(0.0, 0.0)) return 0.0;
  // sigma(q, p, t) psi = ((quad q + p)^T x + i t) psi for the Gaussian.
  const Eigen::VectorXd linear = s.quad.mat() * u.q_part + u.p_part;
  double worst = 0.0;
  for (const Eigen::VectorXd& x : points) {
    if (x.size() != n) throw InputError("apply_sigma: point dimension mismatch");
    const std::complex<double> factor(linear.dot(x), u.central);
    worst = std::max(worst, std::abs(factor) / norm);
  }
  return worst;
}

FresnelResult fresnel_gaussian(const SymmetricForm& a) {
  const SpectralData sd = spectral_or_throw(a, false);
  FresnelResult out;
  out.abs_det = sd.abs_det;
  out.signature = sd.signature;
  out.value = std::pow(2.0 * kPi, 0.5 * a.n()) / std::sqrt(sd.abs_det) *
              unit_phase(sd.signature);
  return out;
}

OracleResult fresnel_quadrature_oracle(const SymmetricForm& a,
                                       const std::vector<double>& eps_schedule,
                                       double rel_gate) {
  const int n = a.n();
  if (n > 2) throw UnsupportedDim("fresnel_quadrature_oracle: n must be 1 or 2");
  if (eps_schedule.size() < 2) {
    throw InputError("fresnel_quadrature_oracle: schedule needs >= 2 nodes");
  }
  QuadratureOptions qopts;
  qopts.rel_tol = 1e-9;
  qopts.abs_tol = 1e-12;
  qopts.max_intervals = 200000;
  std::vector<std::complex<double>> damped;
  for (const double eps : eps_schedule) {
    if (eps <= 0.0) throw InputError("fresnel_quadrature_oracle: eps <= 0");
    if (n == 1) {
      const double q = a.mat()(0, 0);
      const double radius = tail_radius(eps);
      damped.push_back(2.0 * integrate(
          [q, eps](double x) {
            return std::exp(std::complex<double>(-0.5 * eps * x * x,
                                                 -0.5 * q * x * x));
          },
          0.0, radius, qopts));
    } else {
      // Radial direction integrated in closed elementary form:
      // int_0^inf e^{-(eps + i q(theta)) r^2 / 2} r dr = 1 / (eps + i q).
      damped.push_back(2.0 * integrate(
          [&a, eps](double theta) {
            Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
            const double q = dir.dot(a.mat() * dir);
            return 1.0 / std::complex<double>(eps, q);
          },
          0.0, kPi, qopts));
    }
  }
  const ExtrapolationResult ex = richardson_extrapolate(eps_schedule, damped);
  if (!(ex.error <= rel_gate * std::abs(ex.value))) {
    throw NonConvergent("fresnel_quadrature_oracle: extrapolation stalled");
  }
  return {ex.value, ex.error};
}

GaussianSpinor psi(const SymmetricForm& a, std::complex<double> c) {
  const SpectralData sd = spectral_or_throw(a, true);
  GaussianSpinor out;
  out.quad = SymmetricForm(sd.inverse);
  out.coeff = c / std::sqrt(sd.abs_det) * unit_phase(sd.signature);
  out.rep = Rep::position;
  return out;
}

std::complex<double> evaluate_phi(const SymmetricForm& a,
                                  std::complex<double> c) {
  const SpectralData sd = spectral_or_throw(a, false);
  return c / std::sqrt(sd.abs_det) * unit_phase(sd.signature);
}

std::complex<double> oscillatory_phi_oracle(const SymmetricForm& a,
                                            double cutoff_scale,
                                            double rel_gate) {
  const int n = a.n();
  if (n > 2) throw UnsupportedDim("oscillatory_phi_oracle: n must be 1 or 2");
  if (cutoff_scale <= 0.0) {
    throw InputError("oscillatory_phi_oracle: cutoff scale must be positive");
  }
  spectral_or_throw(a, false);
  const double lam = cutoff_scale;
  // Ratio-2 ladder: diagonal differences of the Neville tableau then track
  // the true extrapolation error instead of overstating it.
  const std::vector<double> eps_schedule = {0.2, 0.1, 0.05, 0.025, 0.0125};
  QuadratureOptions qopts;
  qopts.rel_tol = 1e-9;
  qopts.abs_tol = 1e-12;
  qopts.max_intervals = 400000;

  std::complex<double> compact;
  std::vector<std::complex<double>> tails;
  if (n == 1) {
    const double q = a.mat()(0, 0);
    // One sphere point with weight 2; s = u^2 removes the s^{-1/2} factor:
    // int chi e^{-i s q / 2} s^{-1/2} ds = 2 int chi(u^2 / lam) e^{-i q u^2 / 2} du.
    compact = 2.0 * integrate(
        [q, lam](double u) {
          return smooth_cutoff(u * u / lam) *
                 std::exp(std::complex<double>(0.0, -0.5 * q * u * u));
        },
        0.0, std::sqrt(2.0 * lam), qopts);
    for (const double eps : eps_schedule) {
      const double radius = tail_radius(eps);
      tails.push_back(2.0 * integrate(
          [q, lam, eps](double u) {
            const double u2 = u * u;
            return (1.0 - smooth_cutoff(u2 / lam)) *
                   std::exp(std::complex<double>(-0.5 * eps * u2, -0.5 * q * u2));
          },
          std::sqrt(lam), radius, qopts));
    }
  } else {
    // theta-integral over half the circle doubled; the radial tail uses
    // int_0^inf e^{-(eps + i q) s / 2} ds = 2 / (eps + i q) minus the
    // damped compact window, both elementary or small.
    const auto q_of = [&a](double theta) {
      Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
      return dir.dot(a.mat() * dir);
    };
    QuadratureOptions inner_opts;
    inner_opts.rel_tol = 1e-10;
    inner_opts.abs_tol = 1e-13;
    inner_opts.max_intervals = 4000;
    compact = 2.0 * integrate(
        [&](double theta) {
          const double q = q_of(theta);
          return 0.5 * integrate(
              [q, lam](double s) {
                return smooth_cutoff(s / lam) *
                       std::exp(std::complex<double>(0.0, -0.5 * q * s));
              },
              0.0, 2.0 * lam, inner_opts);
        },
        0.0, kPi, qopts);
    for (const double eps : eps_schedule) {
      tails.push_back(2.0 * integrate(
          [&](double theta) {
            const double q = q_of(theta);
            const std::complex<double> z(0.5 * eps, 0.5 * q);
            const std::complex<double> full = 0.5 / z;
            const std::complex<double> window = 0.5 * integrate(
                [q, lam, eps](double s) {
                  return smooth_cutoff(s / lam) *
                         std::exp(std::complex<double>(-0.5 * eps * s,
                                                       -0.5 * q * s));
                },
                0.0, 2.0 * lam, inner_opts);
            return full - window;
          },
          0.0, kPi, qopts));
    }
  }
  const ExtrapolationResult ex = richardson_extrapolate(eps_schedule, tails);
  const std::complex<double> total =
      std::pow(2.0 * kPi, -0.5 * n) * (compact + ex.value);
  if (!(ex.error * std::pow(2.0 * kPi, -0.5 * n) <=
        rel_gate * std::abs(total))) {
    throw NonConvergent("oscillatory_phi_oracle: extrapolation stalled");
  }
  return total;
}

OracleResult forward_fourier_1d(const GaussianSpinor& s, double xi,
                                const std::vector<double>& eps_schedule) {
  if (s.quad.n() != 1) throw InputError("forward_fourier_1d: n must be 1");
  if (s.rep != Rep::position) {
    throw InputError("forward_fourier_1d: spinor must be in position rep");
  }
  const double q = s.quad.mat()(0, 0);
  QuadratureOptions qopts;
  qopts.rel_tol = 1e-9;
  qopts.abs_tol = 1e-12;
  qopts.max_intervals = 200000;
  std::vector<std::complex<double>> damped;
  for (const double eps : eps_schedule) {
    const double radius =
        tail_radius(eps) + 3.0 * std::abs(xi) / std::max(std::abs(q), 0.25);
    damped.push_back(integrate(
        [q, xi, eps](double x) {
          return std::exp(std::complex<double>(-0.5 * eps * x * x,
                                               0.5 * q * x * x - x * xi));
        },
        -radius, radius, qopts));
  }
  const ExtrapolationResult ex = richardson_extrapolate(eps_schedule, damped);
  const double scale = std::pow(2.0 * kPi, -0.5);
  return {scale * s.coeff * ex.value, scale * std::abs(s.coeff) * ex.error};
}

FidOrder fid_order(int n) {
  if (n < 1) throw InputError("fid_order: n must be positive");
  FidOrder out;
  out.n_vars = n;
  out.d_dim = n * (n + 1) / 2;
  out.k_amp = Rational(-n, 2);
  out.m = out.k_amp + Rational(2 * n - out.d_dim, 4);
  if (!(out.m == Rational(-n * (n + 1), 8))) {
    throw Error("fid_order: rational identity violated");
  }
  return out;
}

}  // namespace maslov
