#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "maslov/config.hpp"
#include "maslov/errors.hpp"

namespace maslov {

// Linear symplectic algebra over the standard space (R^{2n}, omega).
//
// Conventions (fixed once, used by every module):
//   * basis (e_1..e_n, f_1..f_n), omega(u, w) = u^T J w with
//     J = [[0, I], [-I, 0]], so omega(e_i, f_j) = delta_ij and J^2 = -I;
//   * Q = span(e_i) plays the role of the zero section, L0 = span(f_j) the
//     fibre over 0, and zeta in L0 is identified with the covector
//     u -> omega(u, zeta) on Q (the dual pairing that fixes all later signs);
//   * a lagrangian subspace is stored as a 2n-by-n frame whose columns span
//     it; frames are column-orthonormalized on construction;
//   * a chart is a pair (base L, complement N) of transversal lagrangians.
//     The subspaces transversal to N are graphs over L, and chart coordinates
//     are the symmetric matrix A = P * G where G is the (complement <- base)
//     graph matrix and P = base^T J complement realizes the pairing above.

class SymplecticSpace {
 public:
  explicit SymplecticSpace(int n);

  int n() const { return n_; }
  int dim() const { return 2 * n_; }
  const Eigen::MatrixXd& J() const { return j_; }

  double omega(const Eigen::VectorXd& u, const Eigen::VectorXd& w) const;

 private:
  int n_;
  Eigen::MatrixXd j_;
};

// A 2n-by-n spanning frame, column-orthonormalized on construction.
// Construction requires full column rank under the rank policy; it does not
// require the span to be lagrangian (is_lagrangian tests that), but every
// operation that consumes a frame as a lagrangian states it as precondition.
class LagrangianFrame {
 public:
  explicit LagrangianFrame(const Eigen::MatrixXd& columns,
                           double tol = kRankTolerance);

  const Eigen::MatrixXd& columns() const { return m_; }
  int n() const { return static_cast<int>(m_.cols()); }
  int ambient_dim() const { return static_cast<int>(m_.rows()); }
  double tol() const { return tol_; }

 private:
  Eigen::MatrixXd m_;
  double tol_;
};

// Symmetric n-by-n matrix; symmetrized entry-by-entry on construction so
// that m(i, j) == m(j, i) holds exactly.
class SymmetricForm {
 public:
  SymmetricForm() = default;
  explicit SymmetricForm(const Eigen::MatrixXd& m);

  static SymmetricForm zero(int n) {
    return SymmetricForm(Eigen::MatrixXd::Zero(n, n));
  }
  static SymmetricForm identity(int n) {
    return SymmetricForm(Eigen::MatrixXd::Identity(n, n));
  }

  const Eigen::MatrixXd& mat() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()); }

 private:
  Eigen::MatrixXd m_;
};

// Chart of the lagrangian grassmannian: all subspaces transversal to
// `complement`, coordinatized as symmetric forms on `base`. Construction
// rejects non-direct sums.
class Chart {
 public:
  Chart(const SymplecticSpace& space, const LagrangianFrame& base,
        const LagrangianFrame& complement);

  int n() const { return base_.n(); }
  const LagrangianFrame& base() const { return base_; }
  const LagrangianFrame& complement() const { return complement_; }
  // P = base^T J complement (invertible for transversal lagrangian pairs).
  const Eigen::MatrixXd& pairing() const { return pairing_; }

  // Coordinates of ambient columns in the (base, complement) basis:
  // returns W with [base complement] W = M; top n rows are base coordinates.
  Eigen::MatrixXd decompose(const Eigen::MatrixXd& m) const;

  Eigen::MatrixXd solve_pairing(const Eigen::MatrixXd& rhs) const;

 private:
  LagrangianFrame base_;
  LagrangianFrame complement_;
  Eigen::MatrixXd pairing_;
  Eigen::PartialPivLU<Eigen::MatrixXd> frame_lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> pairing_lu_;
};

// Canonical frames and charts.
LagrangianFrame q_frame(const SymplecticSpace& space);
LagrangianFrame l0_frame(const SymplecticSpace& space);
// Base Q, complement L0: coordinates of subspaces transversal to the fibre.
Chart chart_over_q(const SymplecticSpace& space);
// Base L0, complement Q: the chart in which the stratification is read off.
Chart chart_over_l0(const SymplecticSpace& space);

// Isotropy test: rank n and max |M^T J M| <= tol * n for the stored
// orthonormal frame.
bool is_lagrangian(const LagrangianFrame& frame, const SymplecticSpace& space);

// dim(span L1 cap span L2) = 2n - rank[L1 | L2] under the rank policy.
int intersection_dim(const LagrangianFrame& l1, const LagrangianFrame& l2,
                     double tol = kRankTolerance);

bool subspace_equal(const LagrangianFrame& l1, const LagrangianFrame& l2,
                    double tol = kRankTolerance);

// Chart coordinates of L in `chart`; requires L transversal to the chart
// complement (NotTransversal otherwise).
SymmetricForm chart_coords(const LagrangianFrame& l, const Chart& chart);

// Inverse of chart_coords: the lagrangian with coordinates A.
LagrangianFrame graph_from_symmetric(const SymmetricForm& a,
                                     const Chart& chart);

// Convenience: the graph frame [I; S] over Q in the canonical chart.
LagrangianFrame graph_over_q(const SymplecticSpace& space,
                             const SymmetricForm& s);

// Coordinate change to the chart with the same base and complement N': the
// symmetric matrix B with rho_{N'}(M) = (I + rho_N(M) B)^{-1} rho_N(M).
// Requires the new complement transversal to the chart base (it is the graph
// of a map from the old complement to the base). The sign is fixed by the
// transition identity; on the n=1 chart (Q, L0) with N' = span(f_1 + b e_1)
// it returns (-b).
SymmetricForm b_matrix(const Chart& chart, const LagrangianFrame& new_complement);

// Applies the transition formula (I + A B)^{-1} A; SingularTransition when
// I + A B is singular under the rank policy.
SymmetricForm transition(const SymmetricForm& a, const SymmetricForm& b);

// Invariant-measure sample of the grassmannian: a Haar unitary X + iY
// (QR of a complex Ginibre matrix with positive-real diagonal) mapped to the
// stacked real frame [X; Y]. Identical seeds give identical frames.
LagrangianFrame random_lagrangian(const SymplecticSpace& space,
                                  std::uint64_t seed);

// First lagrangian transversal to both inputs among: Q, the graph of the
// identity over Q, then up to 64 seeded random lagrangians. SearchFailed if
// none qualifies.
LagrangianFrame find_common_transversal(const SymplecticSpace& space,
                                        const LagrangianFrame& l1,
                                        const LagrangianFrame& l2,
                                        std::uint64_t seed = 0);

// Generalization used for chart legs: transversal to every frame in `frames`.
LagrangianFrame find_transversal_complement(
    const SymplecticSpace& space,
    const std::vector<const LagrangianFrame*>& frames, std::uint64_t seed = 0);

}  // namespace maslov
