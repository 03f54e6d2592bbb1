#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "maslov/symplectic.hpp"

namespace maslov {

// Stratification of the grassmannian by intersection dimension with a fixed
// reference lagrangian L0, and the index of a path counted with crossing
// forms.
//
// In a chart based at L0 the stratum of L is the nullity of its coordinate
// matrix, the singular cycle is the determinantal hypersurface, and a path
// crossing the cycle changes the signature of its coordinate matrix. The
// index convention is fixed once: a crossing where a chart eigenvalue passes
// from negative to positive counts +1, so the index of a path equals
// sum (sig_after - sig_before) / 2 over its crossings. The restriction of
// dA/dt to ker A(t*) is chart-invariant, which makes the count well defined;
// signature differences are always evaluated inside a single chart because
// one-sided signatures alone are not invariant.

struct StratumLabel {
  int k = 0;      // dim(L cap L0)
  int codim = 0;  // k (k + 1) / 2
};

StratumLabel stratum_of(const LagrangianFrame& l, const LagrangianFrame& l0,
                        double tol = kRankTolerance);

// Nullity of a symmetric form under the rank policy.
int nullity(const SymmetricForm& a, double tol = kRankTolerance);

// Signature (positive minus negative eigenvalue count), treating eigenvalues
// inside the tolerance band as zero.
int signature(const SymmetricForm& a, double tol = kRankTolerance);

// True iff every (n-k+1)-by-(n-k+1) minor of A vanishes under a scale-aware
// threshold; agrees with nullity(A) >= k. k must lie in [0, n].
bool minor_test(const SymmetricForm& a, int k, double tol = kRankTolerance);

// Conormal data of the stratum through L: elements (v, -v (x) v) for v in
// a kernel basis and its pairwise sums, spanning the symmetric square of
// L cap L0. Requires the chart base to span L0 and L to lie in the chart.
// EmptyIntersection when L is transversal to L0.
struct ConormalElement {
  Eigen::VectorXd v;   // base-basis coordinates of v in L cap L0
  SymmetricForm beta;  // -v v^T, exactly
};

std::vector<ConormalElement> conormal_spanning_set(const LagrangianFrame& l,
                                                   const LagrangianFrame& l0,
                                                   const Chart& chart);

// Symmetric matrix with exactly k zero eigenvalues planted in a random
// orthogonal eigenframe; the nonzero spectrum is kept away from zero.
SymmetricForm random_symmetric_with_nullity(int n, int k, std::uint64_t seed);

// Discretized path of lagrangian subspaces. Parameters must be strictly
// increasing; a closed path must repeat its first subspace (any frame basis)
// at the last sample.
class GrassmannPath {
 public:
  GrassmannPath(std::vector<double> t, std::vector<LagrangianFrame> frames,
                bool closed);

  int size() const { return static_cast<int>(frames_.size()); }
  int n() const { return frames_.front().n(); }
  bool closed() const { return closed_; }
  const std::vector<double>& t() const { return t_; }
  const std::vector<LagrangianFrame>& frames() const { return frames_; }

 private:
  std::vector<double> t_;
  std::vector<LagrangianFrame> frames_;
  bool closed_;
};

struct CrossingRecord {
  double t = 0.0;              // crossing parameter
  int k = 0;                   // intersection dimension at the crossing
  int signature_jump = 0;      // sig(A(t+)) - sig(A(t-)), |jump| <= 2k
  SymmetricForm crossing_form; // k-by-k restriction of dA/dt to ker A(t*)
};

struct MaslovIndexResult {
  int index = 0;  // sum of signature_jump / 2
  std::vector<CrossingRecord> crossings;
};

struct MaslovOptions {
  double tol = kRankTolerance;
  int probes_per_leg = 16;
  double bisect_dt = 1e-10;     // crossing localization width in t
  int max_retries = 3;          // seeded perturbation attempts
  double perturbation = 1e-6;   // frame perturbation magnitude per retry
  std::uint64_t seed = 0x6d61736c6f76ULL;
};

// Index of the sampled path relative to L0. Between samples the path is
// modeled by linear interpolation in per-leg chart coordinates. Errors:
// EndpointOnCycle for an open path starting or ending on the cycle,
// UnresolvedCrossing when a degenerate crossing survives all perturbation
// retries.
MaslovIndexResult maslov_index(const GrassmannPath& path,
                               const LagrangianFrame& l0,
                               const MaslovOptions& opts = {});

// Independent oracle: winding number of det(X + iY)^2 along a closed path,
// tracked by continuous phase lifting. LiftFailure when consecutive samples
// are too far apart to lift the phase (steps close to a half turn or more).
int winding_oracle(const GrassmannPath& path);

// Test families. calibration_loop samples span(cos t e1 + sin t f1) over
// [0, pi]; its index is +1 under the convention above. unitary_loop drives a
// seeded Haar frame through diag(exp(i k_j t / 2)) over [0, 2 pi]; the
// winding of det^2 equals the sum of the k_j.
GrassmannPath calibration_loop(int samples);
GrassmannPath unitary_loop(const SymplecticSpace& space, std::uint64_t seed,
                           const std::vector<int>& k, int samples);

}  // namespace maslov
