#include "maslov/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace maslov {

namespace {

// Kronrod 15-point nodes on [0, 1] side of [-1, 1] plus the center, with
// the embedded Gauss 7-point rule on the odd-index nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  std::complex<double> value;
  double error;
};

struct ErrorLess {
  bool operator()(const Interval& x, const Interval& y) const {
    return x.error < y.error;
  }
};

Interval k15(const ComplexIntegrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const std::complex<double> fc = f(c);
  std::complex<double> resg = kWg[3] * fc;
  std::complex<double> resk = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const std::complex<double> f1 = f(c - x);
    const std::complex<double> f2 = f(c + x);
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
  }
  Interval out;
  out.a = a;
  out.b = b;
  out.value = resk * h;
  out.error = std::abs(resk - resg) * std::abs(h);
  return out;
}

}  // namespace

std::complex<double> integrate(const ComplexIntegrand& f, double a, double b,
                               const QuadratureOptions& opts) {
  return integrate_with_error(f, a, b, opts).value;
}

QuadratureResult integrate_with_error(const ComplexIntegrand& f, double a,
                                      double b,
                                      const QuadratureOptions& opts) {
  if (a == b) return {};
  std::priority_queue<Interval, std::vector<Interval>, ErrorLess> queue;
  Interval first = k15(f, a, b);
  std::complex<double> total = first.value;
  double total_err = first.error;
  long evals = 15;
  queue.push(first);
  for (int splits = 0; splits < opts.max_intervals; ++splits) {
    if (total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
      return {total, total_err, evals};
    }
    const Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval at floating point resolution; accept its estimate.
      total_err -= worst.error;
      continue;
    }
    const Interval left = k15(f, worst.a, mid);
    const Interval right = k15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  if (total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    return {total, total_err, evals};
  }
  throw NonConvergent("integrate: interval budget exhausted");
}

ExtrapolationResult richardson_extrapolate(
    const std::vector<double>& eps,
    const std::vector<std::complex<double>>& values) {
  const int m = static_cast<int>(eps.size());
  if (m < 2 || values.size() != eps.size()) {
    throw InputError("richardson_extrapolate: need at least two nodes");
  }
  std::vector<std::vector<std::complex<double>>> t(m);
  for (int i = 0; i < m; ++i) {
    t[i].resize(i + 1);
    t[i][0] = values[i];
  }
  for (int i = 1; i < m; ++i) {
    for (int j = 1; j <= i; ++j) {
      const double num = eps[i - j] - eps[i];
      if (num == 0.0) {
        throw InputError("richardson_extrapolate: repeated node");
      }
      t[i][j] = (eps[i - j] * t[i][j - 1] - eps[i] * t[i - 1][j - 1]) / num;
    }
  }
  ExtrapolationResult out;
  out.value = t[m - 1][m - 1];
  out.error = std::abs(t[m - 1][m - 1] - t[m - 2][m - 2]);
  return out;
}

double smooth_cutoff(double u) {
  const auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double up = g(2.0 - u);
  const double down = g(u - 1.0);
  return up / (up + down);
}

}  // namespace maslov
