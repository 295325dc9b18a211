#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixcs/matrix.hpp"

namespace mixcs {

enum class SolveStatus { converged, max_iter, infeasible };

std::string to_string(SolveStatus status);

struct RecoveryResult {
  VectorXd x_star;
  double objective = 0.0;  // ||x_star||_1
  double residual = 0.0;   // ||Phi x_star - y||_2
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
  // max(0, ||Phi^T nu||_inf - 1) for the dual vector that certified the
  // returned point, when one was found.
  std::optional<double> certificate_gap;
};

struct SolverOptions {
  double tol = 1e-6;              // feasibility / stopping tolerance
  std::size_t max_iter = 10000;
  double penalty = 1.0;           // ADMM rho
  double certificate_tol = 1e-6;  // accepted dual infeasibility for early exit
  bool polish = true;             // try support refits with dual certificates
};

// Smallest singular value below which the affine projection is refused.
inline constexpr double kRankThreshold = 1e-10;

// l1 minimisation against a fixed measurement matrix. Construction checks
// full row rank and caches a Cholesky factor of Phi Phi^T; the object is
// immutable afterwards and can serve concurrent solves.
class L1Solver {
 public:
  // Throws SolverError when sigma_min(Phi) < kRankThreshold (this includes
  // every Phi with more rows than columns).
  explicit L1Solver(const MeasurementMatrix& phi);

  // min ||x||_1 s.t. Phi x = y. ADMM with the x-update projecting onto
  // {x : Phi x = y}. Whenever the support of the sparse iterate settles, the
  // support is refitted by least squares and accepted if a dual vector nu
  // with Phi_S^T nu = sign(x_S), ||Phi^T nu||_inf <= 1 + certificate_tol
  // exists (min-norm construction).
  RecoveryResult basis_pursuit(const VectorXd& y, const SolverOptions& options = {}) const;

  // min ||x||_1 s.t. ||Phi x - y||_2 <= eps. Linearized ADMM with a range
  // variable confined to the eps-ball around y, step 0.9 / ||Phi||_2^2.
  // eps = 0 delegates to basis_pursuit.
  RecoveryResult bpdn(const VectorXd& y, double eps, const SolverOptions& options = {}) const;

  std::size_t rows() const { return static_cast<std::size_t>(phi_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(phi_.cols()); }
  double sigma_min() const { return sigma_min_; }
  double sigma_max() const { return sigma_max_; }

 private:
  RowMatrix phi_;
  Eigen::LLT<MatrixXd> gram_factor_;
  double sigma_min_ = 0.0;
  double sigma_max_ = 0.0;
};

RecoveryResult basis_pursuit(const MeasurementMatrix& phi, const VectorXd& y,
                             double tol = 1e-6, std::size_t max_iter = 10000);

RecoveryResult bpdn(const MeasurementMatrix& phi, const VectorXd& y, double eps,
                    double tol = 1e-6, std::size_t max_iter = 10000);

// Size guard for the exact LP reference.
inline constexpr std::size_t kLpMaxRows = 48;
inline constexpr std::size_t kLpMaxCols = 64;

// Exact vertex solution of min 1^T(u + v) s.t. Phi(u - v) = y, u, v >= 0,
// by the dense simplex with Bland's rule. Infeasible systems come back with
// status infeasible. certificate_gap holds the dual infeasibility of the
// final simplex multipliers.
RecoveryResult lp_oracle(const MeasurementMatrix& phi, const VectorXd& y);

struct CertificateCheck {
  bool valid = false;
  double certificate_gap = 0.0;  // max(0, ||Phi^T nu||_inf - 1)
  double sign_mismatch = 0.0;    // ||Phi_S^T nu - sign(x_S)||_inf
  VectorXd nu;
};

// Looks for nu with Phi_S^T nu = sign(x_S) on the support S of x_star and
// ||Phi^T nu||_inf <= 1 + tol. The min-norm least-squares nu is tried
// first; within the LP guard a Chebyshev LP (minimise the off-support
// maximum) is tried next. valid = false is inconclusive.
CertificateCheck dual_certificate_check(const MeasurementMatrix& phi, const VectorXd& x_star,
                                        double tol = 1e-6);

}  // namespace mixcs
