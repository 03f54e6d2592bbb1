#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>

namespace maslov {

// Numerical rank / nullity policy used everywhere in the library.
//
// A singular value sigma_i of an m-by-k matrix counts as zero iff
//   sigma_i <= tol * sigma_max * max(m, k).
// The same rule, applied to |eigenvalue| with sigma_max = max |eigenvalue|,
// decides when a symmetric matrix is treated as singular.
inline constexpr double kRankTolerance = 1e-9;

inline int numerical_rank(const Eigen::VectorXd& singular_values, int rows,
                          int cols, double tol = kRankTolerance) {
  if (singular_values.size() == 0) return 0;
  const double smax = singular_values.maxCoeff();
  const double cut = tol * smax * static_cast<double>(std::max(rows, cols));
  int rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values[i] > cut) ++rank;
  }
  return rank;
}

inline int matrix_rank(const Eigen::MatrixXd& m, double tol = kRankTolerance) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return numerical_rank(svd.singularValues(), static_cast<int>(m.rows()),
                        static_cast<int>(m.cols()), tol);
}

// Worker cap for the few parallel paths (Monte Carlo shards). The
// MASLOV_LAB_THREADS environment variable, when set to a positive integer,
// caps the number of workers; results never depend on the cap because all
// reductions run in fixed shard order.
inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int cap = static_cast<int>(hw);
  if (const char* env = std::getenv("MASLOV_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) cap = std::min<long>(v, 256);
  }
  return std::max(cap, 1);
}

}  // namespace maslov
