#include "maslov/symplectic.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "maslov/rng.hpp"

namespace maslov {

namespace {

Eigen::MatrixXd orthonormalized(const Eigen::MatrixXd& m, double tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  if (numerical_rank(svd.singularValues(), rows, cols, tol) < cols) {
    throw InputError("LagrangianFrame: columns are rank deficient");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(cols);
  for (int j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

SymplecticSpace::SymplecticSpace(int n) : n_(n) {
  if (n < 1) throw InputError("SymplecticSpace: n must be positive");
  j_ = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j_.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j_.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
}

double SymplecticSpace::omega(const Eigen::VectorXd& u,
                              const Eigen::VectorXd& w) const {
  if (u.size() != dim() || w.size() != dim()) {
    throw InputError("omega: vector dimension mismatch");
  }
  return u.dot(j_ * w);
}

LagrangianFrame::LagrangianFrame(const Eigen::MatrixXd& columns, double tol)
    : tol_(tol) {
  const int rows = static_cast<int>(columns.rows());
  const int cols = static_cast<int>(columns.cols());
  if (rows <= 0 || cols <= 0 || rows != 2 * cols) {
    throw InputError("LagrangianFrame: expected a 2n-by-n matrix, got " +
                     std::to_string(rows) + "-by-" + std::to_string(cols));
  }
  if (tol < 0.0) throw InputError("LagrangianFrame: negative tolerance");
  m_ = orthonormalized(columns, tol == 0.0 ? kRankTolerance : tol);
}

SymmetricForm::SymmetricForm(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw InputError("SymmetricForm: matrix must be square");
  }
  const int n = static_cast<int>(m.rows());
  m_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double s = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = s;
      m_(j, i) = s;
    }
  }
}

Chart::Chart(const SymplecticSpace& space, const LagrangianFrame& base,
             const LagrangianFrame& complement)
    : base_(base), complement_(complement) {
  if (base.ambient_dim() != space.dim() ||
      complement.ambient_dim() != space.dim()) {
    throw InputError("Chart: frame dimensions do not match the space");
  }
  if (intersection_dim(base_, complement_) != 0) {
    throw NotTransversal("Chart: base and complement are not transversal");
  }
  const int n = space.n();
  Eigen::MatrixXd bc(2 * n, 2 * n);
  bc.leftCols(n) = base_.columns();
  bc.rightCols(n) = complement_.columns();
  frame_lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(bc);
  pairing_ = base_.columns().transpose() * space.J() * complement_.columns();
  pairing_lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(pairing_);
}

Eigen::MatrixXd Chart::decompose(const Eigen::MatrixXd& m) const {
  return frame_lu_.solve(m);
}

Eigen::MatrixXd Chart::solve_pairing(const Eigen::MatrixXd& rhs) const {
  return pairing_lu_.solve(rhs);
}

LagrangianFrame q_frame(const SymplecticSpace& space) {
  const int n = space.n();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, n);
  m.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  return LagrangianFrame(m);
}

LagrangianFrame l0_frame(const SymplecticSpace& space) {
  const int n = space.n();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, n);
  m.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  return LagrangianFrame(m);
}

Chart chart_over_q(const SymplecticSpace& space) {
  return Chart(space, q_frame(space), l0_frame(space));
}

Chart chart_over_l0(const SymplecticSpace& space) {
  return Chart(space, l0_frame(space), q_frame(space));
}

bool is_lagrangian(const LagrangianFrame& frame,
                   const SymplecticSpace& space) {
  if (frame.ambient_dim() != space.dim()) return false;
  const Eigen::MatrixXd iso =
      frame.columns().transpose() * space.J() * frame.columns();
  const double tol = frame.tol() > 0.0 ? frame.tol() : kRankTolerance;
  return iso.cwiseAbs().maxCoeff() <= tol * static_cast<double>(frame.n());
}

int intersection_dim(const LagrangianFrame& l1, const LagrangianFrame& l2,
                     double tol) {
  if (l1.ambient_dim() != l2.ambient_dim()) {
    throw InputError("intersection_dim: ambient dimensions differ");
  }
  const int dim = l1.ambient_dim();
  Eigen::MatrixXd joint(dim, l1.n() + l2.n());
  joint.leftCols(l1.n()) = l1.columns();
  joint.rightCols(l2.n()) = l2.columns();
  return dim - matrix_rank(joint, tol);
}

bool subspace_equal(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    double tol) {
  return l1.n() == l2.n() && intersection_dim(l1, l2, tol) == l1.n();
}

SymmetricForm chart_coords(const LagrangianFrame& l, const Chart& chart) {
  if (l.ambient_dim() != 2 * chart.n()) {
    throw InputError("chart_coords: frame does not match the chart");
  }
  const int n = chart.n();
  const Eigen::MatrixXd w = chart.decompose(l.columns());
  const Eigen::MatrixXd w_base = w.topRows(n);
  const Eigen::MatrixXd w_comp = w.bottomRows(n);
  if (matrix_rank(w_base) < n) {
    throw NotTransversal("chart_coords: subspace meets the chart complement");
  }
  // G = w_comp * w_base^{-1}, computed as a transposed solve.
  const Eigen::MatrixXd g = w_base.transpose()
                                .partialPivLu()
                                .solve(w_comp.transpose())
                                .transpose();
  return SymmetricForm(chart.pairing() * g);
}

LagrangianFrame graph_from_symmetric(const SymmetricForm& a,
                                     const Chart& chart) {
  if (a.n() != chart.n()) {
    throw InputError("graph_from_symmetric: dimension mismatch");
  }
  const Eigen::MatrixXd g = chart.solve_pairing(a.mat());
  return LagrangianFrame(chart.base().columns() +
                         chart.complement().columns() * g);
}

LagrangianFrame graph_over_q(const SymplecticSpace& space,
                             const SymmetricForm& s) {
  const int n = space.n();
  if (s.n() != n) throw InputError("graph_over_q: dimension mismatch");
  Eigen::MatrixXd m(2 * n, n);
  m.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  m.bottomRows(n) = s.mat();
  return LagrangianFrame(m);
}

SymmetricForm b_matrix(const Chart& chart,
                       const LagrangianFrame& new_complement) {
  const int n = chart.n();
  if (new_complement.ambient_dim() != 2 * n) {
    throw InputError("b_matrix: frame does not match the chart");
  }
  const Eigen::MatrixXd w = chart.decompose(new_complement.columns());
  const Eigen::MatrixXd w_base = w.topRows(n);
  const Eigen::MatrixXd w_comp = w.bottomRows(n);
  if (matrix_rank(w_comp) < n) {
    throw NotTransversal("b_matrix: new complement meets the chart base");
  }
  const Eigen::MatrixXd h = w_comp.transpose()
                                .partialPivLu()
                                .solve(w_base.transpose())
                                .transpose();
  // Graph matrix of the new complement under the omega pairing is H P^{-1};
  // the transition identity fixes the opposite sign.
  const Eigen::MatrixXd hp =
      chart.pairing().transpose().partialPivLu().solve(h.transpose()).transpose();
  return SymmetricForm(-hp);
}

SymmetricForm transition(const SymmetricForm& a, const SymmetricForm& b) {
  if (a.n() != b.n()) throw InputError("transition: dimension mismatch");
  const int n = a.n();
  const Eigen::MatrixXd m =
      Eigen::MatrixXd::Identity(n, n) + a.mat() * b.mat();
  if (matrix_rank(m) < n) {
    throw SingularTransition("transition: I + A B is singular");
  }
  return SymmetricForm(m.partialPivLu().solve(a.mat()));
}

LagrangianFrame random_lagrangian(const SymplecticSpace& space,
                                  std::uint64_t seed) {
  const int n = space.n();
  Rng rng(seed);
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      z(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
    }
  }
  // Modified Gram-Schmidt with positive-real diagonal gives a Haar unitary.
  Eigen::MatrixXcd u = z;
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        u.col(j) -= u.col(k).dot(u.col(j)) * u.col(k);
      }
    }
    const double norm = u.col(j).norm();
    if (norm < 1e-12) {
      return random_lagrangian(space, seed + 0x632be59bd9b4e019ULL);
    }
    u.col(j) /= norm;
  }
  Eigen::MatrixXd frame(2 * n, n);
  frame.topRows(n) = u.real();
  frame.bottomRows(n) = u.imag();
  return LagrangianFrame(frame);
}

LagrangianFrame find_transversal_complement(
    const SymplecticSpace& space,
    const std::vector<const LagrangianFrame*>& frames, std::uint64_t seed) {
  const int n = space.n();
  const auto admissible = [&](const LagrangianFrame& cand) {
    for (const LagrangianFrame* f : frames) {
      if (intersection_dim(cand, *f) != 0) return false;
    }
    return true;
  };
  const LagrangianFrame q = q_frame(space);
  if (admissible(q)) return q;
  const LagrangianFrame graph_id = graph_over_q(space, SymmetricForm::identity(n));
  if (admissible(graph_id)) return graph_id;
  for (std::uint64_t k = 0; k < 64; ++k) {
    const LagrangianFrame cand =
        random_lagrangian(space, seed * 0x2545f4914f6cdd1dULL + k + 1);
    if (admissible(cand)) return cand;
  }
  throw SearchFailed("find_transversal_complement: no candidate qualified");
}

LagrangianFrame find_common_transversal(const SymplecticSpace& space,
                                        const LagrangianFrame& l1,
                                        const LagrangianFrame& l2,
                                        std::uint64_t seed) {
  return find_transversal_complement(space, {&l1, &l2}, seed);
}

}  // namespace maslov
