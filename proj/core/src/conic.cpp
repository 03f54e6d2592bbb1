#include "maslov/conic.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace maslov {

namespace {

int sym_dim(int n) { return n * (n + 1) / 2; }

// Basis of Sym(n): E_ii for i = 0..n-1, then E_ij = e_i e_j^T + e_j e_i^T
// for i < j in lexicographic order.
Eigen::MatrixXd sym_basis_element(int n, int index) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  if (index < n) {
    e(index, index) = 1.0;
    return e;
  }
  int rem = index - n;
  for (int i = 0; i < n; ++i) {
    const int row_len = n - 1 - i;
    if (rem < row_len) {
      const int j = i + 1 + rem;
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      return e;
    }
    rem -= row_len;
  }
  throw InputError("sym_basis_element: index out of range");
}

double frobenius(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return (x.array() * y.array()).sum();
}

struct Tangent {
  Eigen::MatrixXd da;
  Eigen::MatrixXd dbeta;
};

}  // namespace

PhaseEval phase(const SymmetricForm& a, const Eigen::VectorXd& v) {
  if (v.size() != a.n()) throw InputError("phase: dimension mismatch");
  PhaseEval out;
  out.fibre_grad = -(a.mat() * v);
  out.value = 0.5 * v.dot(out.fibre_grad);
  out.base_grad = -0.5 * (v * v.transpose());
  return out;
}

bool critical_set_test(const SymmetricForm& a, const Eigen::VectorXd& v,
                       double tol) {
  if (v.size() != a.n()) throw InputError("critical_set_test: dimension mismatch");
  const double vnorm = v.norm();
  if (vnorm == 0.0) return false;
  return (a.mat() * v).norm() <= tol * a.mat().norm() * vnorm;
}

NondegeneracyResult nondegeneracy_check(const SymmetricForm& a,
                                        const Eigen::VectorXd& v) {
  const int n = a.n();
  if (v.size() != n) throw InputError("nondegeneracy_check: dimension mismatch");
  const int cols = sym_dim(n) + n;
  Eigen::MatrixXd m(n, cols);
  for (int c = 0; c < sym_dim(n); ++c) {
    m.col(c) = -(sym_basis_element(n, c) * v);
  }
  m.rightCols(n) = -a.mat();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  NondegeneracyResult out;
  out.sigma_min = svd.singularValues().minCoeff();
  out.bound = v.norm() / std::sqrt(2.0);
  out.rank = numerical_rank(svd.singularValues(), n, cols, kRankTolerance);
  out.pass = (out.rank == n) &&
             (out.sigma_min >= out.bound * (1.0 - 1e-9) - 1e-12);
  return out;
}

Eigen::VectorXd SPoint::phase_witness() const {
  return std::sqrt(2.0) * v_;
}

SPoint s_point(const SymmetricForm& a, const Eigen::VectorXd& v, double tol) {
  if (!critical_set_test(a, v, tol)) {
    throw NotCritical("s_point: v is not a fibre critical point of the phase");
  }
  Eigen::VectorXd w = v;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] != 0.0) {
      if (w[i] < 0.0) w = -w;
      break;
    }
  }
  const SymmetricForm beta(-(w * w.transpose()));
  return SPoint(a, w, beta);
}

TangencyReport lagrangian_tangency_check(const SPoint& point, double h) {
  const int n = point.n();
  const Eigen::VectorXd v0 = point.v();
  const double vnorm = v0.norm();
  if (vnorm < 1e-12) {
    throw DegenerateBasis("lagrangian_tangency_check: fibre vector vanishes");
  }
  const Eigen::VectorXd u0 = v0 / vnorm;
  const Eigen::MatrixXd a0 = point.a().mat();

  // Orthonormal basis of the complement of u0.
  Eigen::MatrixXd full(n, n);
  full.col(0) = u0;
  full.rightCols(n - 1).setZero();
  {
    int placed = 1;
    for (int i = 0; i < n && placed < n; ++i) {
      Eigen::VectorXd cand = Eigen::VectorXd::Unit(n, i);
      for (int c = 0; c < placed; ++c) cand -= full.col(c).dot(cand) * full.col(c);
      if (cand.norm() > 1e-6) {
        full.col(placed++) = cand / cand.norm();
      }
    }
    if (placed < n) {
      throw DegenerateBasis("lagrangian_tangency_check: complement basis failed");
    }
  }
  const Eigen::MatrixXd q = full.rightCols(n - 1);

  const auto beta_of = [](const Eigen::VectorXd& v) -> Eigen::MatrixXd {
    return -(v * v.transpose());
  };

  std::vector<Tangent> tangents;
  const auto push_curve = [&](const auto& at) {
    const auto [a_p, v_p] = at(h);
    const auto [a_m, v_m] = at(-h);
    Tangent tau;
    tau.da = (a_p - a_m) / (2.0 * h);
    tau.dbeta = (beta_of(v_p) - beta_of(v_m)) / (2.0 * h);
    const double norm = std::sqrt(frobenius(tau.da, tau.da) +
                                  frobenius(tau.dbeta, tau.dbeta));
    if (norm < 1e-12) {
      throw DegenerateBasis("lagrangian_tangency_check: null tangent");
    }
    tau.da /= norm;
    tau.dbeta /= norm;
    tangents.push_back(std::move(tau));
  };

  // Kernel rotations R(s) = exp(s (w u0^T - u0 w^T)).
  for (int c = 0; c < n - 1; ++c) {
    const Eigen::VectorXd w = q.col(c);
    const Eigen::MatrixXd gen = w * u0.transpose() - u0 * w.transpose();
    push_curve([&](double s) {
      const Eigen::MatrixXd r = (s * gen).exp();
      return std::make_pair(Eigen::MatrixXd(r * a0 * r.transpose()),
                            Eigen::VectorXd(vnorm * (r * u0)));
    });
  }
  // Symmetric variations supported on the complement of u0.
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i; j < n - 1; ++j) {
      Eigen::MatrixXd e = q.col(i) * q.col(j).transpose();
      e += q.col(j) * q.col(i).transpose();
      push_curve([&](double s) {
        return std::make_pair(Eigen::MatrixXd(a0 + s * e), v0);
      });
    }
  }
  // Cone scaling.
  push_curve([&](double s) {
    return std::make_pair(a0, Eigen::VectorXd((1.0 + s) * v0));
  });

  TangencyReport report;
  report.curve_count = static_cast<int>(tangents.size());
  const int dim = sym_dim(n);
  Eigen::MatrixXd flat(2 * dim, report.curve_count);
  for (int c = 0; c < report.curve_count; ++c) {
    int r = 0;
    for (int idx = 0; idx < dim; ++idx) {
      const Eigen::MatrixXd e = sym_basis_element(n, idx);
      flat(r, c) = frobenius(tangents[c].da, e);
      flat(dim + r, c) = frobenius(tangents[c].dbeta, e);
      ++r;
    }
  }
  report.tangent_rank = matrix_rank(flat, 1e-7);
  if (report.tangent_rank < dim) {
    throw DegenerateBasis("lagrangian_tangency_check: tangents do not span");
  }
  for (int i = 0; i < report.curve_count; ++i) {
    for (int j = i + 1; j < report.curve_count; ++j) {
      const double omega = frobenius(tangents[i].da, tangents[j].dbeta) -
                           frobenius(tangents[j].da, tangents[i].dbeta);
      report.max_omega = std::max(report.max_omega, std::abs(omega));
    }
  }
  return report;
}

}  // namespace maslov
