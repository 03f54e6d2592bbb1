#include "maslov/acceptance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>

#include "maslov/conic.hpp"
#include "maslov/rng.hpp"
#include "maslov/spinor.hpp"
#include "maslov/stratification.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Epsilon ladder passed to the Fresnel oracle in criterion 4: ratio-2 nodes
// keep the Neville diagonal-difference error estimate representative of the
// true extrapolation error, so the oracle's internal gate stays meaningful.
const std::vector<double> kRatioTwoSchedule = {0.2, 0.1, 0.05, 0.025, 0.0125};

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

std::uint64_t criterion_seed(const AcceptanceConfig& cfg, int id) {
  return cfg.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id);
}

struct Range {
  int lo = 0;
  int hi = -1;  // empty when hi < lo
  bool empty() const { return hi < lo; }
  bool contains(int n) const { return n >= lo && n <= hi; }
};

Range clamp_range(const AcceptanceConfig& cfg, int natural_lo, int natural_hi) {
  return {std::max(cfg.n_min, natural_lo), std::min(cfg.n_max, natural_hi)};
}

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(3);
  out << x;
  return out.str();
}

LagrangianFrame random_transversal(const SymplecticSpace& space,
                                   const LagrangianFrame& avoid,
                                   std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    LagrangianFrame cand = random_lagrangian(space, seed + attempt);
    if (intersection_dim(cand, avoid) == 0) return cand;
  }
  throw SearchFailed("acceptance: no transversal lagrangian found");
}

// Kernel basis of a symmetric form under the rank policy.
Eigen::MatrixXd kernel_basis(const SymmetricForm& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut =
      kRankTolerance * ev.cwiseAbs().maxCoeff() * static_cast<double>(a.n());
  std::vector<int> idx;
  for (int i = 0; i < a.n(); ++i) {
    if (std::abs(ev[i]) <= cut) idx.push_back(i);
  }
  Eigen::MatrixXd basis(a.n(), static_cast<int>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    basis.col(static_cast<int>(c)) = es.eigenvectors().col(idx[c]);
  }
  return basis;
}

CriterionResult criterion_charts(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 1;
  out.name = "chart-transition";
  out.expected = 0.0;
  out.tolerance = 1e-8;
  const Range range = clamp_range(cfg, 1, 6);
  const std::uint64_t base = criterion_seed(cfg, 1);

  // Near-degenerate triples (tiny transversality margins, huge chart
  // coordinates, near-singular I + AB) amplify rounding far beyond the gate
  // while saying nothing about the identity itself, so draws are filtered to
  // a conditioned population and redrawn deterministically.
  const double kCoordBound = 50.0;
  const double kTransitionMargin = 0.02;
  const auto sigma_min = [](const Eigen::MatrixXd& m) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().minCoeff();
  };

  double worst = 0.0;
  long trials = 0;
  bool exhausted = false;
  for (int n = range.lo; n <= range.hi; ++n) {
    const SymplecticSpace space(n);
    Rng rng = Rng::for_shard(base, static_cast<std::uint64_t>(n));
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
    long accepted = 0;
    for (long draw = 0; accepted < 1000 && draw < 8000; ++draw) {
      const std::uint64_t s = base + 1000003ULL * n + 7ULL * draw;
      const LagrangianFrame l = random_lagrangian(space, s);
      const LagrangianFrame nc = random_transversal(space, l, s + 101);
      const LagrangianFrame nc2 = random_transversal(space, l, s + 70001);
      const Chart chart1(space, l, nc);
      const Chart chart2(space, l, nc2);

      const SymmetricForm a_seed(rng.gaussian_symmetric(n));
      const LagrangianFrame m = graph_from_symmetric(a_seed, chart1);
      if (intersection_dim(m, nc2) != 0) continue;
      const Eigen::MatrixXd a1 = chart_coords(m, chart1).mat();
      const Eigen::MatrixXd a2 = chart_coords(m, chart2).mat();
      const SymmetricForm b = b_matrix(chart1, nc2);
      const SymmetricForm b_back = b_matrix(chart2, nc);
      if (a2.norm() > kCoordBound || b.mat().norm() > kCoordBound ||
          b_back.mat().norm() > kCoordBound) {
        continue;
      }
      if (sigma_min(eye + a1 * b.mat()) < kTransitionMargin ||
          sigma_min(eye + a2 * b_back.mat()) < kTransitionMargin) {
        continue;
      }
      const Eigen::MatrixXd fwd = transition(SymmetricForm(a1), b).mat();
      const Eigen::MatrixXd back =
          transition(SymmetricForm(a2), b_back).mat();
      worst = std::max(worst, (fwd - a2).norm() / std::max(1.0, a2.norm()));
      worst = std::max(worst, (back - a1).norm() / std::max(1.0, a1.norm()));
      ++accepted;
      ++trials;
    }
    if (accepted < 1000) exhausted = true;
  }
  out.measured = worst;
  out.pass = worst <= out.tolerance && !exhausted && trials > 0;
  out.detail = "worst relative residual " + fmt(worst) + " over " +
               std::to_string(trials) + " triples (n " +
               std::to_string(range.lo) + ".." + std::to_string(range.hi) +
               ")";
  return out;
}

CriterionResult criterion_stratification(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 2;
  out.name = "stratification";
  out.expected = 0.0;
  out.tolerance = 0.5;
  const Range range = clamp_range(cfg, 1, 6);
  const std::uint64_t base = criterion_seed(cfg, 2);

  long mismatches = 0;
  long checked = 0;
  for (int n = range.lo; n <= range.hi; ++n) {
    const SymplecticSpace space(n);
    const Chart chart = chart_over_l0(space);
    const LagrangianFrame l0 = l0_frame(space);
    for (int k = 0; k <= n; ++k) {
      for (int trial = 0; trial < 1000; ++trial) {
        const std::uint64_t s =
            base + 104729ULL * n + 1299709ULL * k + 11ULL * trial;
        const SymmetricForm a = random_symmetric_with_nullity(n, k, s);
        bool ok = nullity(a) == k;
        ok = ok && minor_test(a, k);
        if (k < n) ok = ok && !minor_test(a, k + 1);
        if (!ok) ++mismatches;
        ++checked;
      }
      if (k == 0) continue;
      const int expected_dim = k * (k + 1) / 2;
      for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t s =
            base + 15485863ULL * n + 32452843ULL * k + 13ULL * trial;
        const SymmetricForm a = random_symmetric_with_nullity(n, k, s);
        const LagrangianFrame l = graph_from_symmetric(a, chart);
        const std::vector<ConormalElement> set =
            conormal_spanning_set(l, l0, chart);
        bool ok = static_cast<int>(set.size()) == expected_dim;
        if (ok) {
          Eigen::MatrixXd flat(static_cast<int>(set.size()), n * n);
          for (std::size_t i = 0; i < set.size(); ++i) {
            Eigen::MatrixXd b = set[i].beta.mat();
            flat.row(static_cast<int>(i)) =
                Eigen::Map<Eigen::VectorXd>(b.data(), n * n).transpose();
          }
          ok = matrix_rank(flat) == expected_dim;
        }
        if (!ok) ++mismatches;
        ++checked;
      }
    }
  }
  out.measured = static_cast<double>(mismatches);
  out.pass = mismatches == 0 && checked > 0;
  out.detail = std::to_string(mismatches) + " mismatches over " +
               std::to_string(checked) + " planted points";
  return out;
}

CriterionResult criterion_phase_suite(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 3;
  out.name = "phase-suite";
  out.expected = 0.0;
  out.tolerance = 1e-6;
  const Range range = clamp_range(cfg, 1, 4);
  const std::uint64_t base = criterion_seed(cfg, 3);

  long failures = 0;
  long checked = 0;
  double worst_omega = 0.0;
  for (int n = range.lo; n <= range.hi; ++n) {
    Rng rng = Rng::for_shard(base, static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 1000; ++trial) {
      const int k = 1 + trial % n;
      const std::uint64_t s = base + 49979687ULL * n + 17ULL * trial;
      const SymmetricForm a = random_symmetric_with_nullity(n, k, s);
      const Eigen::MatrixXd kernel = kernel_basis(a);
      bool ok = kernel.cols() == k;
      if (ok) {
        Eigen::VectorXd v = kernel * rng.gaussian_vector(k);
        if (v.norm() < 1e-12) v = kernel.col(0);
        v = v.normalized() * rng.uniform(0.5, 2.0);
        ok = critical_set_test(a, v);
        ok = ok && nondegeneracy_check(a, v).pass;
        if (ok) {
          const SPoint plus = s_point(a, v);
          const SPoint minus = s_point(a, -v);
          ok = (plus.v() - minus.v()).cwiseAbs().maxCoeff() == 0.0 &&
               (plus.beta().mat() - minus.beta().mat())
                       .cwiseAbs()
                       .maxCoeff() == 0.0;
        }
      }
      if (!ok) ++failures;
      ++checked;
    }
    if (n == 2 || n == 3) {
      for (int trial = 0; trial < 25; ++trial) {
        const int k = 1 + trial % n;
        const std::uint64_t s = base + 86028121ULL * n + 19ULL * trial;
        const SymmetricForm a = random_symmetric_with_nullity(n, k, s);
        const Eigen::MatrixXd kernel = kernel_basis(a);
        if (kernel.cols() != k) {
          ++failures;
          ++checked;
          continue;
        }
        Eigen::VectorXd v = kernel * rng.gaussian_vector(k);
        if (v.norm() < 1e-12) v = kernel.col(0);
        v = v.normalized() * rng.uniform(0.7, 1.5);
        const SPoint point = s_point(a, v);
        const TangencyReport report = lagrangian_tangency_check(point);
        worst_omega = std::max(worst_omega, report.max_omega);
        if (report.max_omega > 1e-6 ||
            report.tangent_rank != n * (n + 1) / 2) {
          ++failures;
        }
        ++checked;
      }
    }
  }
  if (range.contains(1)) {
    const SymmetricForm a0 = SymmetricForm::zero(1);
    Eigen::VectorXd v(1);
    v << 1.3;
    const SPoint point = s_point(a0, v);
    const bool exact = point.beta().mat()(0, 0) == -(1.3 * 1.3) &&
                       point.a().mat()(0, 0) == 0.0;
    if (!exact) ++failures;
    ++checked;
  }
  out.measured = worst_omega;
  out.pass = failures == 0 && checked > 0;
  out.detail = std::to_string(failures) + " failures over " +
               std::to_string(checked) +
               " checks; worst tangency residual " + fmt(worst_omega);
  return out;
}

CriterionResult criterion_fresnel(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 4;
  out.name = "fresnel";
  out.expected = 0.0;
  out.tolerance = 1e-4;
  const Range range = clamp_range(cfg, 1, 2);
  const std::uint64_t base = criterion_seed(cfg, 4);

  double worst = 0.0;
  long failures = 0;
  long checked = 0;
  for (int n = range.lo; n <= range.hi; ++n) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::uint64_t s = base + 23ULL * n + 29ULL * trial;
      const SymmetricForm a = random_symmetric_with_nullity(n, 0, s);
      const FresnelResult closed = fresnel_gaussian(a);
      const OracleResult oracle =
          fresnel_quadrature_oracle(a, kRatioTwoSchedule);
      const double rel =
          std::abs(closed.value - oracle.value) / std::abs(closed.value);
      worst = std::max(worst, rel);
      if (rel > out.tolerance) ++failures;
      ++checked;
    }
  }
  if (range.contains(1)) {
    const FresnelResult one = fresnel_gaussian(SymmetricForm::identity(1));
    const std::complex<double> target =
        std::sqrt(2.0 * kPi) * std::polar(1.0, -0.25 * kPi);
    if (std::abs(one.value - target) > 1e-12 * std::abs(target)) ++failures;
    ++checked;
  }
  if (range.contains(2)) {
    Eigen::MatrixXd d(2, 2);
    d << 1.0, 0.0, 0.0, -1.0;
    const FresnelResult two = fresnel_gaussian(SymmetricForm(d));
    if (std::abs(two.value - std::complex<double>(2.0 * kPi, 0.0)) >
        1e-12 * 2.0 * kPi) {
      ++failures;
    }
    ++checked;
  }
  out.measured = worst;
  out.pass = failures == 0 && checked > 0;
  out.detail = "worst relative error " + fmt(worst) + " over " +
               std::to_string(checked) + " forms";
  return out;
}

CriterionResult criterion_annihilation(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 5;
  out.name = "annihilation";
  out.expected = 0.0;
  out.tolerance = 1e-10;
  const Range range = clamp_range(cfg, 1, 4);
  const std::uint64_t base = criterion_seed(cfg, 5);

  double worst = 0.0;
  long checked = 0;
  for (int n = range.lo; n <= range.hi; ++n) {
    Rng rng = Rng::for_shard(base, static_cast<std::uint64_t>(n));
    for (int lag = 0; lag < 50; ++lag) {
      const SymmetricForm b(rng.gaussian_symmetric(n));
      const GaussianSpinor spinor = spinor_of_graph(b, {1.0, 0.0});
      std::vector<Eigen::VectorXd> points;
      points.reserve(100);
      for (int p = 0; p < 100; ++p) {
        points.push_back(2.0 * rng.gaussian_vector(n));
      }
      for (int vec = 0; vec < 20; ++vec) {
        const Eigen::VectorXd q = rng.gaussian_vector(n);
        const HeisenbergElement u{q, b.mat() * q, 0.0};
        worst = std::max(worst, apply_sigma(u, spinor, points));
        ++checked;
      }
    }
  }
  out.measured = worst;
  out.pass = worst <= out.tolerance && checked > 0;
  out.detail = "worst annihilation residual " + fmt(worst) + " over " +
               std::to_string(checked) + " vectors";
  return out;
}

CriterionResult criterion_integrability(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 6;
  out.name = "integrability-scaling";
  out.expected = 0.0;
  out.tolerance = 1.0;  // margins are normalized by their own gates
  const Range range = clamp_range(cfg, 1, std::min(4, cfg.estimator.max_n));
  EstimatorConfig est = cfg.estimator;
  est.seed = criterion_seed(cfg, 6);

  double worst = 0.0;
  std::ostringstream detail;
  bool pass = true;
  bool first = true;
  const auto note = [&](const std::string& label, double margin) {
    worst = std::max(worst, margin);
    if (!(margin <= 1.0)) pass = false;
    if (!first) detail << "; ";
    first = false;
    detail << label << " margin " << fmt(margin);
  };

  if (range.contains(1)) {
    const double annulus = annulus_integral(1, 0.5, 1.0, est).value;
    const double exact = 4.0 - 2.0 * std::sqrt(2.0);
    note("n=1 annulus", std::abs(annulus - exact) / (1e-12 * exact));
    const double ball = ball_integral(1, est).value;
    note("n=1 ball", std::abs(ball - 4.0) / (4e-12));
  }
  for (int n = range.lo; n <= range.hi; ++n) {
    const ScalingRatioResult ratio = scaling_ratio_test(n, est);
    if (n <= 2) {
      note("n=" + std::to_string(n) + " ratio",
           std::abs(ratio.measured - ratio.predicted) /
               (1e-6 * ratio.predicted));
    } else {
      note("n=" + std::to_string(n) + " ratio",
           std::abs(ratio.measured - ratio.predicted) /
               (3.0 * ratio.std_error));
    }
  }
  out.measured = worst;
  out.pass = pass && !first;
  out.detail = detail.str();
  return out;
}

CriterionResult criterion_growth(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 7;
  out.name = "growth-exponent";
  out.expected = -0.5;
  out.tolerance = 0.02;
  const Range range = clamp_range(cfg, 1, 4);

  bool pass = true;
  double worst_dev = 0.0;
  double worst_slope = -0.5;
  std::ostringstream detail;
  for (int n = range.lo; n <= range.hi; ++n) {
    const GrowthFit fit = growth_exponent_fit(n);
    const double dev = std::abs(fit.slope + 0.5);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst_slope = fit.slope;
    }
    if (dev > 0.02 || fit.r_squared < 0.999) pass = false;
    detail << "n=" << n << " slope " << fmt(fit.slope) << " r2 "
           << fmt(fit.r_squared) << "; ";
  }
  if (range.hi >= 2) {
    const int n2 = std::max(2, range.lo);
    const GrowthFit fit2 = growth_exponent_fit(n2, GrowthFamily::sigma2);
    if (std::abs(fit2.slope + 1.0) > 0.04 || fit2.r_squared < 0.999) {
      pass = false;
    }
    detail << "sigma2 n=" << n2 << " slope " << fmt(fit2.slope);
  }
  out.measured = worst_slope;
  out.pass = pass;
  out.detail = detail.str();
  return out;
}

CriterionResult criterion_fid_order(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 8;
  out.name = "fid-order";
  out.expected = 0.0;
  out.tolerance = 0.5;
  const Range range = clamp_range(cfg, 1, 64);

  long mismatches = 0;
  long checked = 0;
  for (int n = range.lo; n <= range.hi; ++n) {
    const FidOrder order = fid_order(n);
    const Rational target(-static_cast<std::int64_t>(n) * (n + 1), 8);
    bool ok = order.m == target;
    ok = ok && order.k_amp == Rational(-n, 2);
    ok = ok && order.n_vars == n && order.d_dim == n * (n + 1) / 2;
    ok = ok && order.m == order.k_amp +
                              Rational(2 * order.n_vars - order.d_dim, 4);
    if (!ok) ++mismatches;
    ++checked;
  }
  out.measured = static_cast<double>(mismatches);
  out.pass = mismatches == 0 && checked > 0;
  out.detail = std::to_string(mismatches) + " mismatches over n " +
               std::to_string(range.lo) + ".." + std::to_string(range.hi);
  return out;
}

CriterionResult criterion_oscillatory(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 9;
  out.name = "oscillatory-oracle";
  out.expected = 0.0;
  out.tolerance = 1e-3;
  const Range range = clamp_range(cfg, 1, 2);
  const std::uint64_t base = criterion_seed(cfg, 9);

  double worst = 0.0;
  long checked = 0;
  for (int n = range.lo; n <= range.hi; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::uint64_t s = base + 37ULL * n + 41ULL * trial;
      const SymmetricForm a = random_symmetric_with_nullity(n, 0, s);
      const std::complex<double> target = evaluate_phi(a, {1.0, 0.0});
      const std::complex<double> osc = oscillatory_phi_oracle(a, 4.0);
      worst = std::max(worst, std::abs(osc - target) / std::abs(target));
      ++checked;
    }
  }
  out.measured = worst;
  out.pass = worst <= out.tolerance && checked > 0;
  out.detail = "worst relative error " + fmt(worst) + " over " +
               std::to_string(checked) + " forms";
  return out;
}

CriterionResult criterion_maslov(const AcceptanceConfig& cfg) {
  CriterionResult out;
  out.id = 10;
  out.name = "maslov-index";
  out.expected = 0.0;
  out.tolerance = 0.5;
  const Range range = clamp_range(cfg, 1, 3);
  const std::uint64_t base = criterion_seed(cfg, 10);

  long disagreements = 0;
  long checked = 0;
  std::ostringstream detail;
  if (range.contains(1)) {
    const SymplecticSpace space(1);
    const MaslovIndexResult calib =
        maslov_index(calibration_loop(81), l0_frame(space));
    if (std::abs(calib.index) != 1) ++disagreements;
    ++checked;
    detail << "calibration index " << calib.index << "; ";
  }

  std::vector<int> ns;
  for (int n = range.lo; n <= range.hi; ++n) ns.push_back(n);
  if (!ns.empty()) {
    const int total_loops = 50;
    Rng rng(base);
    for (int i = 0; i < total_loops; ++i) {
      const int n = ns[i % ns.size()];
      const SymplecticSpace space(n);
      std::vector<int> k(n);
      for (int j = 0; j < n; ++j) {
        k[j] = static_cast<int>(std::floor(rng.uniform(-2.0, 3.0)));
      }
      const std::uint64_t s = base + 53ULL * i + 1;
      const GrassmannPath path = unitary_loop(space, s, k, 64);
      const int winding = winding_oracle(path);
      const MaslovIndexResult result =
          maslov_index(path, l0_frame(space));
      const GrassmannPath dense = unitary_loop(space, s, k, 127);
      const MaslovIndexResult dense_result =
          maslov_index(dense, l0_frame(space));
      if (result.index != winding || dense_result.index != result.index) {
        ++disagreements;
      }
      ++checked;
    }
  }
  out.measured = static_cast<double>(disagreements);
  out.pass = disagreements == 0 && checked > 0;
  detail << disagreements << " disagreements over " << checked << " paths";
  out.detail = detail.str();
  return out;
}

}  // namespace

std::optional<CriterionResult> run_criterion(int id,
                                             const AcceptanceConfig& cfg) {
  if (id < 1 || id > kCriterionCount) {
    throw InputError("run_criterion: id must lie in [1, 10]");
  }
  static constexpr int kNaturalLo[kCriterionCount] = {1, 1, 1, 1, 1,
                                                      1, 1, 1, 1, 1};
  static constexpr int kNaturalHi[kCriterionCount] = {6, 6, 4, 2, 4,
                                                      4, 4, 64, 2, 3};
  const Range range =
      clamp_range(cfg, kNaturalLo[id - 1], kNaturalHi[id - 1]);
  if (range.empty()) return std::nullopt;

  const double start = now_seconds();
  CriterionResult result;
  switch (id) {
    case 1:
      result = criterion_charts(cfg);
      break;
    case 2:
      result = criterion_stratification(cfg);
      break;
    case 3:
      result = criterion_phase_suite(cfg);
      break;
    case 4:
      result = criterion_fresnel(cfg);
      break;
    case 5:
      result = criterion_annihilation(cfg);
      break;
    case 6:
      result = criterion_integrability(cfg);
      break;
    case 7:
      result = criterion_growth(cfg);
      break;
    case 8:
      result = criterion_fid_order(cfg);
      break;
    case 9:
      result = criterion_oscillatory(cfg);
      break;
    default:
      result = criterion_maslov(cfg);
      break;
  }
  result.runtime_seconds = now_seconds() - start;
  return result;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    std::optional<CriterionResult> result = run_criterion(id, cfg);
    if (result.has_value()) out.push_back(std::move(*result));
  }
  return out;
}

}  // namespace maslov
