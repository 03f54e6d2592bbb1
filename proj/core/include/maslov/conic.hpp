#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "maslov/config.hpp"
#include "maslov/errors.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

// The generating family phi_A(v) = -(1/2) v^T A v lives on Sym(n) x R^n with
// base variable A and fibre variable v. Cotangent directions on Sym(n) are
// paired with tangent directions through the Frobenius inner product
// <X, Y> = sum_ij X_ij Y_ij.
struct PhaseEval {
  double value = 0.0;           // -(1/2) v^T A v
  Eigen::VectorXd fibre_grad;   // -A v
  Eigen::MatrixXd base_grad;    // -(1/2) v v^T
};

PhaseEval phase(const SymmetricForm& a, const Eigen::VectorXd& v);

// True when v is a nonzero fibre critical point of phi_A, i.e. A v = 0 up to
// tol * |A| * |v|.
bool critical_set_test(const SymmetricForm& a, const Eigen::VectorXd& v,
                       double tol = 1e-9);

struct NondegeneracyResult {
  double sigma_min = 0.0;  // smallest singular value of the derivative
  double bound = 0.0;      // |v| / sqrt(2)
  bool pass = false;
  int rank = 0;
};

// Derivative of (A, v) |-> -A v with respect to (A, v), assembled column by
// column over the basis E_ii, E_ij = e_i e_j^T + e_j e_i^T (i < j, diagonal
// entries first) followed by the coordinate directions of v. Full row rank n
// with sigma_min >= |v| / sqrt(2) certifies the critical set is cut out
// transversally.
NondegeneracyResult nondegeneracy_check(const SymmetricForm& a,
                                        const Eigen::VectorXd& v);

// A point of the conic lagrangian: base point A, fibre critical vector v,
// and the cotangent value beta = -v v^T it generates. The map v |-> beta is
// exactly two-to-one since beta determines v only up to sign; v is stored
// with its first nonzero component positive.
class SPoint {
 public:
  SPoint(const SymmetricForm& a, const Eigen::VectorXd& v,
         const SymmetricForm& beta)
      : a_(a), v_(v), beta_(beta) {}

  int n() const { return a_.n(); }
  const SymmetricForm& a() const { return a_; }
  const Eigen::VectorXd& v() const { return v_; }
  const SymmetricForm& beta() const { return beta_; }

  // The fibre vector that reproduces beta through the -(1/2) w w^T base
  // gradient of the phase: w = sqrt(2) v.
  Eigen::VectorXd phase_witness() const;

 private:
  SymmetricForm a_;
  Eigen::VectorXd v_;
  SymmetricForm beta_;
};

// Validates (A, v) as a critical pair (NotCritical otherwise) and returns
// the induced point with sign-canonicalized v and beta = -v v^T.
SPoint s_point(const SymmetricForm& a, const Eigen::VectorXd& v,
               double tol = 1e-9);

struct TangencyReport {
  double max_omega = 0.0;  // largest |omega(tau_i, tau_j)| over curve pairs
  int curve_count = 0;
  int tangent_rank = 0;
};

// Differentiates a full set of curves that stay exactly on the conic
// lagrangian through the given point (kernel rotations, symmetric-form
// variations on the orthogonal complement of v, and the cone scaling), and
// evaluates the canonical two-form of T*Sym(n) on every pair of tangents.
// All values vanish for a lagrangian submanifold.
TangencyReport lagrangian_tangency_check(const SPoint& point, double h = 1e-5);

}  // namespace maslov
