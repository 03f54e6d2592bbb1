#include "maslov/harness.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

#include "maslov/config.hpp"
#include "maslov/quadrature.hpp"
#include "maslov/rng.hpp"
#include "maslov/spinor.hpp"

namespace maslov {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

int sym_dim(int n) { return n * (n + 1) / 2; }

// Frobenius-isometric coordinates: diagonal entries first, then the
// off-diagonal entries (i < j, lexicographic) scaled by sqrt(2).
Eigen::MatrixXd sym_from_iso(int n, const Eigen::VectorXd& c) {
  Eigen::MatrixXd a(n, n);
  const double inv_sqrt2 = 0.7071067811865475244008443621048490;
  int k = 0;
  for (int i = 0; i < n; ++i) a(i, i) = c[k++];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = c[k] * inv_sqrt2;
      a(j, i) = a(i, j);
      ++k;
    }
  }
  return a;
}

double ball_volume(int d, double r) {
  return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) *
         std::pow(r, d);
}

std::uint64_t double_bits(double x) {
  std::uint64_t out = 0;
  std::memcpy(&out, &x, sizeof(out));
  return out;
}

// The eigenvalue reduction at n = 2 separates into a radial factor and the
// angular integral
//   W = int_0^{2 pi} |cos a - sin a| / sqrt(|cos a sin a|) da.
// Substituting b = 2a, folding the symmetries of sin b, and applying the
// half-angle identity sqrt(1 - sin b) + sqrt(1 + sin b) = 2 cos(b / 2) on
// [0, pi / 2] gives W = 4 sqrt(2) int_0^{pi/2} cos(b / 2) / sqrt(sin b) db,
// whose only singularity sits at the exactly representable endpoint b = 0
// and is removed by b = u^2.
QuadratureResult angular_weyl_factor() {
  QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  opts.abs_tol = 1e-15;
  const auto integrand = [](double u) {
    if (u == 0.0) return std::complex<double>(1.0, 0.0);
    const double b = u * u;
    return std::complex<double>(u * std::cos(0.5 * b) / std::sqrt(std::sin(b)),
                                0.0);
  };
  QuadratureResult out =
      integrate_with_error(integrand, 0.0, std::sqrt(0.5 * kPi), opts);
  const double scale = 8.0 * std::sqrt(2.0);
  out.value *= scale;
  out.error *= scale;
  return out;
}

IntegralEstimate annulus_deterministic(double r_in, double r_out,
                                       const EstimatorConfig& cfg) {
  const QuadratureResult angular = angular_weyl_factor();
  const double radial = 0.5 * (r_out * r_out - r_in * r_in);
  const double prefactor = kPi / std::sqrt(2.0);
  IntegralEstimate out;
  out.value = prefactor * radial * angular.value.real();
  out.std_error = prefactor * radial * std::max(angular.error, 1e-15);
  out.method = EstimateMethod::deterministic_quadrature;
  out.samples = angular.evaluations;
  out.seed = cfg.seed;
  return out;
}

double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  if (m % 2 == 1) return v[m / 2];
  return 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

IntegralEstimate annulus_monte_carlo(int n, double r_in, double r_out,
                                     const EstimatorConfig& cfg) {
  const int d = sym_dim(n);
  const int groups = cfg.groups;
  if (groups < 2) throw InputError("annulus_integral: need at least 2 groups");
  const long target = (n >= 4) ? cfg.samples_n4 : cfg.samples_n3;
  const long per_group = std::max<long>((target + groups - 1) / groups, 1);

  // Each (n, r_in, r_out) triple gets its own stream family so estimates of
  // different shells are statistically independent.
  const std::uint64_t base_seed =
      cfg.seed ^ (double_bits(r_in) * 0x9e3779b97f4a7c15ULL) ^
      (double_bits(r_out) * 0xbf58476d1ce4e5b9ULL) ^
      (static_cast<std::uint64_t>(n) * 0x94d049bb133111ebULL);

  std::vector<double> group_means(groups, 0.0);
  const auto run_group = [&](int g) {
    Rng rng = Rng::for_shard(base_seed, static_cast<std::uint64_t>(g));
    double sum = 0.0;
    for (long s = 0; s < per_group; ++s) {
      double radius = 0.0;
      Eigen::VectorXd dir;
      do {
        dir = rng.gaussian_vector(d);
        const double norm = dir.norm();
        if (norm <= 0.0) continue;
        dir /= norm;
        radius = r_out * std::pow(rng.uniform(), 1.0 / d);
      } while (radius < r_in);
      const Eigen::VectorXd point = radius * dir;
      const Eigen::MatrixXd a = sym_from_iso(n, point);
      const double det = std::abs(a.determinant());
      sum += 1.0 / std::sqrt(std::max(det, 1e-300));
    }
    group_means[g] = sum / static_cast<double>(per_group);
  };

  const int workers = std::min(worker_count(), groups);
  if (workers <= 1) {
    for (int g = 0; g < groups; ++g) run_group(g);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int g = w; g < groups; g += workers) run_group(g);
      });
    }
    for (auto& t : pool) t.join();
  }

  const double shell_volume = ball_volume(d, r_out) - ball_volume(d, r_in);
  const double med = sorted_median(group_means);
  std::vector<double> dev(group_means.size());
  for (std::size_t i = 0; i < group_means.size(); ++i) {
    dev[i] = std::abs(group_means[i] - med);
  }
  const double mad = sorted_median(dev);
  const double sigma_robust = 1.4826022185056018 * mad;
  const double median_factor = 1.2533141373155003;  // sqrt(pi / 2)

  IntegralEstimate out;
  out.value = shell_volume * med;
  out.std_error = shell_volume * median_factor * sigma_robust /
                  std::sqrt(static_cast<double>(groups));
  out.method = EstimateMethod::monte_carlo_median_of_means;
  out.samples = per_group * groups;
  out.seed = cfg.seed;
  return out;
}

Eigen::MatrixXd growth_matrix(int n, GrowthFamily family, double t) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  switch (family) {
    case GrowthFamily::sigma1:
      a(0, 0) = t;
      break;
    case GrowthFamily::sigma2:
      a(0, 0) = t;
      a(1, 1) = t;
      break;
    case GrowthFamily::offset:
      a(0, 0) = 1.0 + t;
      break;
  }
  return a;
}

}  // namespace

std::string method_name(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::analytic:
      return "analytic";
    case EstimateMethod::deterministic_quadrature:
      return "deterministic_quadrature";
    case EstimateMethod::monte_carlo_median_of_means:
      return "monte_carlo_median_of_means";
  }
  return "unknown";
}

IntegralEstimate annulus_integral(int n, double r_in, double r_out,
                                  const EstimatorConfig& cfg) {
  if (n < 1) throw InputError("annulus_integral: n must be positive");
  if (!(r_in >= 0.0) || !(r_out > r_in)) {
    throw InputError("annulus_integral: need 0 <= r_in < r_out");
  }
  if (n > cfg.max_n) {
    throw UnsupportedDim("annulus_integral: n exceeds the configured maximum");
  }
  if (cfg.force_mc || n >= 3) return annulus_monte_carlo(n, r_in, r_out, cfg);
  if (n == 1) {
    IntegralEstimate out;
    out.value = 4.0 * (std::sqrt(r_out) - std::sqrt(r_in));
    out.std_error = 0.0;
    out.method = EstimateMethod::analytic;
    out.samples = 0;
    out.seed = cfg.seed;
    return out;
  }
  return annulus_deterministic(r_in, r_out, cfg);
}

ScalingRatioResult scaling_ratio_test(int n, const EstimatorConfig& cfg) {
  const IntegralEstimate inner = annulus_integral(n, 0.25, 0.5, cfg);
  const IntegralEstimate outer = annulus_integral(n, 0.5, 1.0, cfg);
  ScalingRatioResult out;
  out.measured = inner.value / outer.value;
  out.predicted = std::pow(2.0, -0.5 * n * n);
  const double rel_inner = inner.std_error / std::abs(inner.value);
  const double rel_outer = outer.std_error / std::abs(outer.value);
  out.std_error = std::abs(out.measured) * std::hypot(rel_inner, rel_outer);
  if (inner.method == EstimateMethod::monte_carlo_median_of_means) {
    out.pass = std::abs(out.measured - out.predicted) <= 3.0 * out.std_error;
  } else {
    out.pass =
        std::abs(out.measured - out.predicted) <= 1e-6 * out.predicted;
  }
  return out;
}

IntegralEstimate ball_integral(int n, const EstimatorConfig& cfg) {
  IntegralEstimate out = annulus_integral(n, 0.5, 1.0, cfg);
  const double denom = 1.0 - std::pow(2.0, -0.5 * n * n);
  out.value /= denom;
  out.std_error /= denom;
  return out;
}

GrowthFit growth_exponent_fit(int n, GrowthFamily family, double window_lo,
                              double window_hi, int points) {
  if (n < 1) throw InputError("growth_exponent_fit: n must be positive");
  if (family == GrowthFamily::sigma2 && n < 2) {
    throw InputError("growth_exponent_fit: two-crossing family needs n >= 2");
  }
  if (!(window_lo > 0.0) || !(window_hi > window_lo)) {
    throw BadWindow("growth_exponent_fit: window must satisfy 0 < lo < hi");
  }
  if (points < 2) throw BadWindow("growth_exponent_fit: too few points");

  GrowthFit fit;
  fit.window = {window_lo, window_hi};
  const double log_ratio = std::log(window_hi / window_lo);
  for (int k = 0; k < points; ++k) {
    const double frac =
        (points == 1) ? 0.0 : static_cast<double>(k) / (points - 1);
    const double t = window_lo * std::exp(log_ratio * frac);
    const SymmetricForm a(growth_matrix(n, family, t));
    try {
      const std::complex<double> phi = evaluate_phi(a, {1.0, 0.0});
      fit.t.push_back(t);
      fit.magnitude.push_back(std::abs(phi));
    } catch (const SingularForm&) {
      continue;
    }
  }
  if (fit.t.size() < 8) {
    throw BadWindow("growth_exponent_fit: fewer than 8 valid samples");
  }

  const int m = static_cast<int>(fit.t.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = std::log(fit.t[i]);
    ys[i] = std::log(fit.magnitude[i]);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 1e-300) {
    fit.r_squared = 0.0;
  } else {
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = 1.0 - std::max(ss_res, 0.0) / syy;
  }
  return fit;
}

std::vector<PairingSample> pairing_convergence_test(
    int n, const TestDensity& density, const std::vector<double>& levels) {
  if (n < 1 || n > 2) {
    throw UnsupportedDim("pairing_convergence_test: only n in {1, 2}");
  }
  if (levels.empty()) {
    throw InputError("pairing_convergence_test: no mesh levels");
  }
  for (double h : levels) {
    if (!(h > 0.0)) {
      throw InputError("pairing_convergence_test: mesh levels must be positive");
    }
  }
  if (!(density.width > 0.0) || !(density.support > 0.0)) {
    throw InputError("pairing_convergence_test: density needs positive scale");
  }

  const int d = sym_dim(n);
  Eigen::VectorXd center = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < n; ++i) center[i] = density.center_offset;
  const double bound = center.norm() + density.support;
  const double inv_two_w2 = 0.5 / (density.width * density.width);
  const double quarter_pi = 0.25 * kPi;

  const auto rho = [&](const Eigen::VectorXd& c) {
    const double r = (c - center).norm();
    if (r >= density.support) return 0.0;
    return density.amplitude * std::exp(-r * r * inv_two_w2) *
           smooth_cutoff(2.0 * r / density.support);
  };

  std::vector<PairingSample> out;
  out.reserve(levels.size());
  for (double h : levels) {
    const long cells = std::max<long>(
        static_cast<long>(std::ceil(2.0 * bound / h)), 1);
    const double lo = -0.5 * h * static_cast<double>(cells) + 0.5 * h;
    std::complex<double> acc(0.0, 0.0);
    const double cell_measure = std::pow(h, d);

    if (n == 1) {
      Eigen::VectorXd c(1);
      for (long i = 0; i < cells; ++i) {
        const double a = lo + h * static_cast<double>(i);
        if (std::abs(a) < h) continue;
        c[0] = a;
        const double w = rho(c);
        if (w == 0.0) continue;
        const double mag = 1.0 / std::sqrt(std::abs(a));
        const double phase = (a > 0.0) ? -quarter_pi : quarter_pi;
        acc += w * mag * std::polar(1.0, phase);
      }
    } else {
      Eigen::VectorXd c(3);
      for (long i = 0; i < cells; ++i) {
        c[0] = lo + h * static_cast<double>(i);
        for (long j = 0; j < cells; ++j) {
          c[1] = lo + h * static_cast<double>(j);
          for (long k = 0; k < cells; ++k) {
            c[2] = lo + h * static_cast<double>(k);
            const double w = rho(c);
            if (w == 0.0) continue;
            const double off = c[2] * 0.7071067811865475244;
            const double mean = 0.5 * (c[0] + c[1]);
            const double disc = std::sqrt(0.25 * (c[0] - c[1]) * (c[0] - c[1]) +
                                          off * off);
            const double l1 = mean + disc;
            const double l2 = mean - disc;
            if (std::min(std::abs(l1), std::abs(l2)) < h) continue;
            const double det = l1 * l2;
            const int sig = (l1 > 0.0 ? 1 : -1) + (l2 > 0.0 ? 1 : -1);
            acc += w / std::sqrt(std::abs(det)) *
                   std::polar(1.0, -quarter_pi * sig);
          }
        }
      }
    }
    out.push_back({h, acc * cell_measure});
  }
  return out;
}

}  // namespace maslov
