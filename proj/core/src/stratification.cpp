#include "maslov/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <string>

#include "maslov/rng.hpp"

namespace maslov {

namespace {

// Internal signal: a crossing could not be classified decisively; the caller
// retries with a perturbed path.
struct DegenerateCrossingSignal {
  std::string what;
};

bool next_combination(std::vector<int>& c, int n) {
  const int m = static_cast<int>(c.size());
  for (int i = m - 1; i >= 0; --i) {
    if (c[i] < n - m + i) {
      ++c[i];
      for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Eigen::MatrixXd real_orthogonal(int n, Rng& rng) {
  const Eigen::MatrixXd g = rng.gaussian_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n);
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

std::complex<double> det_squared(const LagrangianFrame& frame) {
  const int n = frame.n();
  Eigen::MatrixXcd u(n, n);
  u.real() = frame.columns().topRows(n);
  u.imag() = frame.columns().bottomRows(n);
  const std::complex<double> d = u.determinant();
  return d * d;
}

}  // namespace

StratumLabel stratum_of(const LagrangianFrame& l, const LagrangianFrame& l0,
                        double tol) {
  StratumLabel label;
  label.k = intersection_dim(l, l0, tol);
  label.codim = label.k * (label.k + 1) / 2;
  return label;
}

int nullity(const SymmetricForm& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = tol * ev.cwiseAbs().maxCoeff() * a.n();
  int zeros = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= cut) ++zeros;
  }
  return zeros;
}

int signature(const SymmetricForm& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat(),
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = tol * ev.cwiseAbs().maxCoeff() * a.n();
  int sig = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut) ++sig;
    else if (ev[i] < -cut) --sig;
  }
  return sig;
}

bool minor_test(const SymmetricForm& a, int k, double tol) {
  const int n = a.n();
  if (k < 0 || k > n) throw InputError("minor_test: k out of range");
  if (k == 0) return true;
  const int m = n - k + 1;
  const double amax = a.mat().cwiseAbs().maxCoeff();
  if (amax == 0.0) return true;
  // Hadamard-style scale: an m-by-m minor is bounded by (sqrt(m) max|A|)^m.
  const double cut =
      tol * std::pow(std::sqrt(static_cast<double>(m)) * amax, m) * m;
  std::vector<int> rows(m);
  std::iota(rows.begin(), rows.end(), 0);
  do {
    std::vector<int> cols(m);
    std::iota(cols.begin(), cols.end(), 0);
    do {
      Eigen::MatrixXd sub(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = a.mat()(rows[i], cols[j]);
      if (std::abs(sub.determinant()) > cut) return false;
    } while (next_combination(cols, n));
  } while (next_combination(rows, n));
  return true;
}

std::vector<ConormalElement> conormal_spanning_set(const LagrangianFrame& l,
                                                   const LagrangianFrame& l0,
                                                   const Chart& chart) {
  if (!subspace_equal(chart.base(), l0)) {
    throw InputError("conormal_spanning_set: chart is not based at L0");
  }
  const SymmetricForm a = chart_coords(l, chart);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.mat());
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = kRankTolerance * ev.cwiseAbs().maxCoeff() * a.n();
  std::vector<int> kernel_cols;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= cut) kernel_cols.push_back(static_cast<int>(i));
  }
  const int k = static_cast<int>(kernel_cols.size());
  if (k == 0) {
    throw EmptyIntersection("conormal_spanning_set: L is transversal to L0");
  }
  std::vector<ConormalElement> out;
  out.reserve(k * (k + 1) / 2);
  const auto push = [&out](const Eigen::VectorXd& v) {
    ConormalElement e;
    e.v = v;
    e.beta = SymmetricForm(-(v * v.transpose()));
    out.push_back(std::move(e));
  };
  for (int i = 0; i < k; ++i) push(es.eigenvectors().col(kernel_cols[i]));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      push(es.eigenvectors().col(kernel_cols[i]) +
           es.eigenvectors().col(kernel_cols[j]));
    }
  }
  return out;
}

SymmetricForm random_symmetric_with_nullity(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 0 || k > n) {
    throw InputError("random_symmetric_with_nullity: bad dimensions");
  }
  Rng rng(seed);
  const Eigen::MatrixXd u = real_orthogonal(n, rng);
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double mag = 0.5 + 2.0 * rng.uniform();
    d[i] = (rng.uniform() < 0.5 ? -mag : mag);
  }
  // Plant zeros at seeded positions.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform() * (i + 1));
    std::swap(idx[i], idx[std::min(j, i)]);
  }
  for (int i = 0; i < k; ++i) d[idx[i]] = 0.0;
  return SymmetricForm(u.transpose() * d.asDiagonal() * u);
}

GrassmannPath::GrassmannPath(std::vector<double> t,
                             std::vector<LagrangianFrame> frames, bool closed)
    : t_(std::move(t)), frames_(std::move(frames)), closed_(closed) {
  if (frames_.size() < 2) {
    throw InputError("GrassmannPath: need at least two samples");
  }
  if (t_.size() != frames_.size()) {
    throw InputError("GrassmannPath: sample count mismatch");
  }
  const int n = frames_.front().n();
  const int ad = frames_.front().ambient_dim();
  for (const auto& f : frames_) {
    if (f.n() != n || f.ambient_dim() != ad) {
      throw InputError("GrassmannPath: inhomogeneous frames");
    }
  }
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    if (!(t_[i] < t_[i + 1])) {
      throw InputError("GrassmannPath: parameters must increase strictly");
    }
  }
  if (closed_ && !subspace_equal(frames_.front(), frames_.back())) {
    throw InputError("GrassmannPath: closed path must return to its start");
  }
}

int winding_oracle(const GrassmannPath& path) {
  if (!path.closed()) {
    throw InputError("winding_oracle: path must be closed");
  }
  constexpr double kMaxStep = 2.0;  // radians of det^2 phase per sample step
  double total = 0.0;
  std::complex<double> prev = det_squared(path.frames().front());
  for (int i = 1; i < path.size(); ++i) {
    const std::complex<double> cur = det_squared(path.frames()[i]);
    const double step = std::arg(cur / prev);
    if (std::abs(step) >= kMaxStep) {
      throw LiftFailure("winding_oracle: samples too coarse to lift phase");
    }
    total += step;
    prev = cur;
  }
  const double w = total / (2.0 * 3.14159265358979323846);
  const long rounded = std::lround(w);
  if (std::abs(w - static_cast<double>(rounded)) > 0.25) {
    throw LiftFailure("winding_oracle: lifted phase does not close");
  }
  return static_cast<int>(rounded);
}

GrassmannPath calibration_loop(int samples) {
  if (samples < 3) throw InputError("calibration_loop: too few samples");
  std::vector<double> t(samples);
  std::vector<LagrangianFrame> frames;
  frames.reserve(samples);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < samples; ++i) {
    t[i] = pi * static_cast<double>(i) / static_cast<double>(samples - 1);
    Eigen::MatrixXd m(2, 1);
    m(0, 0) = std::cos(t[i]);
    m(1, 0) = std::sin(t[i]);
    frames.emplace_back(m);
  }
  return GrassmannPath(std::move(t), std::move(frames), true);
}

GrassmannPath unitary_loop(const SymplecticSpace& space, std::uint64_t seed,
                           const std::vector<int>& k, int samples) {
  const int n = space.n();
  if (static_cast<int>(k.size()) != n) {
    throw InputError("unitary_loop: need one integer per dimension");
  }
  if (samples < 8) throw InputError("unitary_loop: too few samples");
  Rng rng(seed);
  Eigen::MatrixXcd v1(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v1(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
  // Haar unitary via modified Gram-Schmidt with positive-real diagonal.
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int c = 0; c < j; ++c) v1.col(j) -= v1.col(c).dot(v1.col(j)) * v1.col(c);
    }
    v1.col(j) /= v1.col(j).norm();
  }
  const Eigen::MatrixXd r2 = real_orthogonal(n, rng);
  const double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<double> t(samples);
  std::vector<LagrangianFrame> frames;
  frames.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    t[s] = two_pi * static_cast<double>(s) / static_cast<double>(samples - 1);
    Eigen::VectorXcd phases(n);
    for (int j = 0; j < n; ++j) {
      phases[j] = std::polar(1.0, 0.5 * k[j] * t[s]);
    }
    const Eigen::MatrixXcd u = v1 * phases.asDiagonal() * r2.cast<std::complex<double>>();
    Eigen::MatrixXd frame(2 * n, n);
    frame.topRows(n) = u.real();
    frame.bottomRows(n) = u.imag();
    frames.emplace_back(frame);
  }
  return GrassmannPath(std::move(t), std::move(frames), true);
}

namespace {

struct LegData {
  std::optional<Chart> chart;
  Eigen::MatrixXd a0, a1;
  double t0 = 0.0, t1 = 0.0;
};

Eigen::MatrixXd leg_coords(const LegData& leg, double s) {
  return ((1.0 - s) * leg.a0 + s * leg.a1).eval();
}

double leg_det(const LegData& leg, double s) {
  return leg_coords(leg, s).determinant();
}

// Signature demanding a clear spectral gap around zero; nullopt when any
// eigenvalue sits inside the widened tolerance band.
std::optional<int> decisive_signature(const Eigen::MatrixXd& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double cut = 10.0 * tol * ev.cwiseAbs().maxCoeff() * ev.size();
  int sig = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > cut) ++sig;
    else if (ev[i] < -cut) --sig;
    else return std::nullopt;
  }
  return sig;
}

struct LocatedCrossing {
  double t = 0.0;
  bool junction = false;
  int sample = -1;  // junction sample index
};

struct ScoredChart {
  std::optional<Chart> chart;
  std::vector<Eigen::MatrixXd> coords;
  double score = std::numeric_limits<double>::max();
};

// Picks a chart based at l0 whose complement keeps every target's
// coordinates small. Bounded coordinates guarantee that the linear
// interpolation between targets is the short path, with no pole of the
// chart in between.
ScoredChart bounded_chart(const SymplecticSpace& space,
                          const LagrangianFrame& l0,
                          const std::vector<const LagrangianFrame*>& targets,
                          std::uint64_t seed) {
  constexpr double kAccept = 8.0;
  constexpr double kReject = 100.0;
  ScoredChart best;
  const auto consider = [&](const LagrangianFrame& cand) -> bool {
    Eigen::MatrixXd stacked(2 * space.n(), 2 * space.n());
    stacked << l0.columns(), cand.columns();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
    if (svd.singularValues().minCoeff() < 0.05) return false;
    Chart chart(space, l0, cand);
    std::vector<Eigen::MatrixXd> coords;
    double score = 0.0;
    for (const LagrangianFrame* t : targets) {
      try {
        coords.push_back(chart_coords(*t, chart).mat());
      } catch (const NotTransversal&) {
        return false;
      }
      score = std::max(score, coords.back().cwiseAbs().maxCoeff());
    }
    if (score < best.score) {
      best.score = score;
      best.chart.emplace(std::move(chart));
      best.coords = std::move(coords);
    }
    return best.score <= kAccept;
  };
  bool done = consider(q_frame(space));
  if (!done) done = consider(graph_over_q(space, SymmetricForm::identity(space.n())));
  if (!done) {
    Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(space.n(), space.n());
    done = consider(graph_over_q(space, SymmetricForm(neg)));
  }
  for (int k = 0; k < 40 && !done; ++k) {
    done = consider(random_lagrangian(
        space, seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(k) + 1));
  }
  if (!best.chart || best.score > kReject) {
    throw InputError(
        "maslov_index: consecutive samples too far apart for a common chart");
  }
  return best;
}

class IndexComputation {
 public:
  IndexComputation(const SymplecticSpace& space, const LagrangianFrame& l0,
                   const std::vector<double>& ts,
                   const std::vector<LagrangianFrame>& frames, bool closed,
                   const MaslovOptions& opts, int attempt)
      : space_(space), l0_(l0), ts_(ts), frames_(frames), closed_(closed),
        opts_(opts), attempt_(attempt) {}

  MaslovIndexResult run() {
    build_legs();
    locate_crossings();
    return evaluate_crossings();
  }

 private:
  void build_legs() {
    const int legs = static_cast<int>(frames_.size()) - 1;
    legs_.resize(legs);
    for (int i = 0; i < legs; ++i) {
      ScoredChart sc =
          bounded_chart(space_, l0_, {&frames_[i], &frames_[i + 1]},
                        opts_.seed + 977ULL * i + 31337ULL * attempt_);
      legs_[i].chart = std::move(sc.chart);
      legs_[i].a0 = std::move(sc.coords[0]);
      legs_[i].a1 = std::move(sc.coords[1]);
      legs_[i].t0 = ts_[i];
      legs_[i].t1 = ts_[i + 1];
    }
  }

  // Probes the determinant along a leg, nudging probe points off near-zeros
  // so every retained value has a decisive sign.
  void locate_crossings() {
    const int probes = std::max(opts_.probes_per_leg, 4);
    for (int li = 0; li < static_cast<int>(legs_.size()); ++li) {
      const LegData& leg = legs_[li];
      const int kj = intersection_dim(frames_[li], l0_, opts_.tol);
      if (kj > 0) {
        LocatedCrossing c;
        c.t = ts_[li];
        c.junction = true;
        c.sample = li;
        crossings_.push_back(c);
      }
      std::vector<double> ss, dd;
      double scale = 0.0;
      for (int j = 0; j <= probes; ++j) {
        const double s = static_cast<double>(j) / probes;
        scale = std::max(scale, std::abs(leg_det(leg, s)));
      }
      if (scale <= 1e-250) {
        throw DegenerateCrossingSignal{"leg determinant vanishes identically"};
      }
      const double tiny = 1e-10 * scale;
      for (int j = 0; j <= probes; ++j) {
        double s = static_cast<double>(j) / probes;
        double d = leg_det(leg, s);
        for (int shift = 1; std::abs(d) <= tiny && shift <= 4; ++shift) {
          const double dir = (j == probes) ? -1.0 : 1.0;
          s = static_cast<double>(j) / probes + dir * shift / (9.0 * probes);
          d = leg_det(leg, s);
        }
        if (std::abs(d) <= tiny) {
          throw DegenerateCrossingSignal{"cannot move probe off the cycle"};
        }
        ss.push_back(s);
        dd.push_back(d);
      }
      for (std::size_t j = 0; j + 1 < ss.size(); ++j) {
        if ((dd[j] > 0.0) != (dd[j + 1] > 0.0)) {
          const double s_star = bisect(leg, ss[j], ss[j + 1], dd[j]);
          LocatedCrossing c;
          c.t = leg.t0 + s_star * (leg.t1 - leg.t0);
          crossings_.push_back(c);
        } else if (j + 2 < ss.size() && std::abs(dd[j + 1]) < 1e-5 * scale &&
                   std::abs(dd[j + 1]) < std::abs(dd[j]) &&
                   std::abs(dd[j + 1]) < std::abs(dd[j + 2])) {
          // Determinant dip without a sign change: an even-multiplicity
          // touch. Resolve by minimizing |det|.
          const auto [s_min, d_min] = minimize_abs_det(leg, ss[j], ss[j + 2]);
          if (std::abs(d_min) <= 1e-12 * scale) {
            LocatedCrossing c;
            c.t = leg.t0 + s_min * (leg.t1 - leg.t0);
            crossings_.push_back(c);
          }
        }
      }
    }
    std::sort(crossings_.begin(), crossings_.end(),
              [](const LocatedCrossing& a, const LocatedCrossing& b) {
                return a.t < b.t;
              });
    // Merge crossings closer than the localization width.
    std::vector<LocatedCrossing> merged;
    for (const auto& c : crossings_) {
      if (!merged.empty() && c.t - merged.back().t <= 4.0 * opts_.bisect_dt) {
        if (c.junction) merged.back() = c;
        continue;
      }
      merged.push_back(c);
    }
    crossings_.swap(merged);
  }

  double bisect(const LegData& leg, double sa, double sb, double da) const {
    const double resolution =
        std::max(opts_.bisect_dt / std::max(leg.t1 - leg.t0, 1e-300), 1e-15);
    while (sb - sa > resolution) {
      const double sm = 0.5 * (sa + sb);
      const double dm = leg_det(leg, sm);
      if (dm == 0.0) return sm;
      if ((dm > 0.0) == (da > 0.0)) {
        sa = sm;
        da = dm;
      } else {
        sb = sm;
      }
    }
    return 0.5 * (sa + sb);
  }

  std::pair<double, double> minimize_abs_det(const LegData& leg, double sa,
                                             double sb) const {
    for (int iter = 0; iter < 200 && (sb - sa) > 1e-14; ++iter) {
      const double m1 = sa + (sb - sa) / 3.0;
      const double m2 = sb - (sb - sa) / 3.0;
      if (std::abs(leg_det(leg, m1)) < std::abs(leg_det(leg, m2))) {
        sb = m2;
      } else {
        sa = m1;
      }
    }
    const double s = 0.5 * (sa + sb);
    return {s, leg_det(leg, s)};
  }

  double path_start() const { return ts_.front(); }
  double path_end() const { return ts_.back(); }

  // Frame of the interpolated path at parameter t (wrapped for closed paths,
  // clamped for open ones).
  LagrangianFrame frame_at(double t) const {
    const double t0 = path_start();
    const double t1 = path_end();
    if (closed_) {
      const double period = t1 - t0;
      while (t < t0) t += period;
      while (t >= t1) t -= period;
    } else {
      t = std::clamp(t, t0, t1);
    }
    int li = static_cast<int>(
        std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin()) - 1;
    li = std::clamp(li, 0, static_cast<int>(legs_.size()) - 1);
    const LegData& leg = legs_[li];
    const double s = (t - leg.t0) / (leg.t1 - leg.t0);
    return graph_from_symmetric(SymmetricForm(leg_coords(leg, s)),
                                *leg.chart);
  }

  MaslovIndexResult evaluate_crossings() {
    MaslovIndexResult result;
    const int count = static_cast<int>(crossings_.size());
    for (int ci = 0; ci < count; ++ci) {
      const LocatedCrossing& c = crossings_[ci];
      const double gap = neighbor_gap(ci);
      double delta = 0.25 * gap;
      delta = std::min(delta, 0.45 * min_leg_span());
      delta = std::max(delta, 4.0 * opts_.bisect_dt);
      CrossingRecord rec = evaluate_one(c, delta);
      result.index += rec.signature_jump / 2;
      result.crossings.push_back(std::move(rec));
    }
    return result;
  }

  double min_leg_span() const {
    double span = std::numeric_limits<double>::max();
    for (const auto& leg : legs_) span = std::min(span, leg.t1 - leg.t0);
    return span;
  }

  double neighbor_gap(int ci) const {
    const int count = static_cast<int>(crossings_.size());
    const double t = crossings_[ci].t;
    double gap = std::numeric_limits<double>::max();
    if (count > 1) {
      const double prev = crossings_[(ci - 1 + count) % count].t;
      const double next = crossings_[(ci + 1) % count].t;
      const double period = path_end() - path_start();
      double dp = std::abs(t - prev);
      double dn = std::abs(next - t);
      if (closed_) {
        dp = std::min(dp, period - dp);
        dn = std::min(dn, period - dn);
      }
      gap = std::min(dp, dn);
    }
    if (!closed_) {
      gap = std::min({gap, t - path_start(), path_end() - t});
      if (gap <= 0.0) gap = std::min(path_end() - path_start(), 1.0) * 1e-3;
    } else {
      gap = std::min(gap, path_end() - path_start());
    }
    return gap;
  }

  CrossingRecord evaluate_one(const LocatedCrossing& c, double delta) const {
    for (int widen = 0; widen < 3; ++widen) {
      const double d = delta * std::pow(4.0, widen);
      double t_minus = c.t - d;
      double t_plus = c.t + d;
      if (!closed_) {
        t_minus = std::max(t_minus, path_start());
        t_plus = std::min(t_plus, path_end());
      }
      const LagrangianFrame g_minus = frame_at(t_minus);
      const LagrangianFrame g_plus = frame_at(t_plus);
      const LagrangianFrame g_star =
          c.junction ? frames_[c.sample] : frame_at(c.t);
      const ScoredChart sc = bounded_chart(
          space_, l0_, {&g_minus, &g_plus, &g_star},
          opts_.seed + 7919ULL * static_cast<std::uint64_t>(
                           1000.0 * std::abs(c.t) + widen));
      const Eigen::MatrixXd& a_minus = sc.coords[0];
      const Eigen::MatrixXd& a_plus = sc.coords[1];
      const Eigen::MatrixXd& a_star = sc.coords[2];
      const auto sig_minus = decisive_signature(a_minus, opts_.tol);
      const auto sig_plus = decisive_signature(a_plus, opts_.tol);
      if (!sig_minus || !sig_plus) continue;

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_star);
      const Eigen::VectorXd ev = es.eigenvalues();
      const double slope_scale =
          ((a_plus - a_minus) / (t_plus - t_minus)).cwiseAbs().maxCoeff();
      const double cut =
          std::max(opts_.tol * ev.cwiseAbs().maxCoeff() * ev.size(),
                   100.0 * slope_scale * opts_.bisect_dt);
      std::vector<int> kernel_cols;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) <= cut) kernel_cols.push_back(static_cast<int>(i));
      }
      const int k = static_cast<int>(kernel_cols.size());
      const int jump = *sig_plus - *sig_minus;
      if (k == 0 || std::abs(jump) > 2 * k) continue;

      Eigen::MatrixXd kernel(a_star.rows(), k);
      for (int i = 0; i < k; ++i) kernel.col(i) = es.eigenvectors().col(kernel_cols[i]);
      const Eigen::MatrixXd slope = (a_plus - a_minus) / (t_plus - t_minus);
      const SymmetricForm form(
          (kernel.transpose() * slope * kernel).eval());
      // Consistency between the restricted crossing form and the observed
      // signature jump; a degenerate form defers to the perturbation retry.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fes(form.mat(),
                                                         Eigen::EigenvaluesOnly);
      const Eigen::VectorXd fev = fes.eigenvalues();
      const double fcut = 1e-6 * std::max(fev.cwiseAbs().maxCoeff(), 1e-300);
      int fsig = 0;
      bool degenerate = false;
      for (Eigen::Index i = 0; i < fev.size(); ++i) {
        if (fev[i] > fcut) ++fsig;
        else if (fev[i] < -fcut) --fsig;
        else degenerate = true;
      }
      if (degenerate || 2 * fsig != jump) {
        throw DegenerateCrossingSignal{"degenerate crossing form"};
      }
      CrossingRecord rec;
      rec.t = c.t;
      rec.k = k;
      rec.signature_jump = jump;
      rec.crossing_form = form;
      return rec;
    }
    throw DegenerateCrossingSignal{"signatures indecisive near crossing"};
  }

  const SymplecticSpace& space_;
  const LagrangianFrame& l0_;
  const std::vector<double>& ts_;
  const std::vector<LagrangianFrame>& frames_;
  bool closed_;
  const MaslovOptions& opts_;
  int attempt_;
  std::vector<LegData> legs_;
  std::vector<LocatedCrossing> crossings_;
};

}  // namespace

MaslovIndexResult maslov_index(const GrassmannPath& path,
                               const LagrangianFrame& l0,
                               const MaslovOptions& opts) {
  const int n = l0.n();
  if (path.n() != n) throw InputError("maslov_index: dimension mismatch");
  const SymplecticSpace space(n);
  if (!path.closed()) {
    if (intersection_dim(path.frames().front(), l0, opts.tol) > 0 ||
        intersection_dim(path.frames().back(), l0, opts.tol) > 0) {
      throw EndpointOnCycle("maslov_index: open path endpoint lies on the cycle");
    }
  }
  std::string last_reason = "unresolved crossing";
  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    std::vector<LagrangianFrame> frames;
    frames.reserve(path.size());
    if (attempt == 0) {
      frames = path.frames();
    } else {
      for (int i = 0; i < path.size(); ++i) {
        if (path.closed() && i + 1 == path.size()) {
          frames.push_back(frames.front());
          break;
        }
        Rng rng = Rng::for_shard(opts.seed + 1315423911ULL * attempt, i);
        const Eigen::MatrixXd noise =
            rng.gaussian_matrix(2 * n, path.frames()[i].n());
        frames.emplace_back(path.frames()[i].columns() +
                            opts.perturbation * noise);
      }
    }
    try {
      IndexComputation comp(space, l0, path.t(), frames, path.closed(), opts,
                            attempt);
      return comp.run();
    } catch (const DegenerateCrossingSignal& sig) {
      last_reason = sig.what;
    }
  }
  throw UnresolvedCrossing("maslov_index: " + last_reason +
                           " after perturbation retries");
}

}  // namespace maslov
