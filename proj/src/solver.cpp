#include "mixcs/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mixcs/error.hpp"
#include "mixcs/simplex.hpp"
#include "mixcs/symmetric_eigen.hpp"

namespace mixcs {
namespace {

using Index = Eigen::Index;

VectorXd soft_threshold(const VectorXd& v, double t) {
  return v.unaryExpr([t](double a) {
    if (a > t) return a - t;
    if (a < -t) return a + t;
    return 0.0;
  });
}

std::vector<Index> support_of(const VectorXd& v) {
  std::vector<Index> s;
  for (Index i = 0; i < v.size(); ++i)
    if (v(i) != 0.0) s.push_back(i);
  return s;
}

// Refit of one candidate support together with its dual vector.
struct SupportFit {
  bool ok = false;
  VectorXd x;
  VectorXd nu;
  double residual = 0.0;
  double gap = 0.0;
};

// eps == 0: least squares on S, nu the solution of Phi_S^T nu = sign(x_S)
// closest to `anchor` (min-norm when no anchor is given; otherwise both are
// tried and the one with the smaller gap kept).
// eps > 0: x_S = x_ls - lambda G^{-1} s with lambda chosen so the residual
// norm equals eps; then nu = (y - Phi x) / lambda satisfies Phi_S^T nu = s.
// `signs` supplies s for eps > 0 and is ignored otherwise.
SupportFit fit_support(const RowMatrix& phi, const std::vector<Index>& support,
                       const VectorXd& y, double eps, const VectorXd& signs,
                       const VectorXd& anchor = VectorXd()) {
  SupportFit fit;
  const Index n = phi.rows();
  const Index s = static_cast<Index>(support.size());
  if (s == 0 || s > n) return fit;

  MatrixXd phi_s(n, s);
  for (Index j = 0; j < s; ++j) phi_s.col(j) = phi.col(support[j]);
  Eigen::HouseholderQR<MatrixXd> qr(phi_s);
  const auto r = qr.matrixQR().topLeftCorner(s, s).triangularView<Eigen::Upper>();
  const VectorXd rdiag = qr.matrixQR().diagonal().head(s).cwiseAbs();
  if (rdiag.minCoeff() <= 1e-10 * rdiag.maxCoeff()) {
    // Dependent columns (a face of optimal solutions): refit on a basic
    // subset chosen by column pivoting.
    Eigen::ColPivHouseholderQR<MatrixXd> pivoted(phi_s);
    pivoted.setThreshold(1e-10);
    const Index rank = pivoted.rank();
    if (rank == 0 || rank == s) return fit;
    std::vector<Index> basic;
    for (Index j = 0; j < rank; ++j) basic.push_back(support[pivoted.colsPermutation().indices()(j)]);
    std::sort(basic.begin(), basic.end());
    return fit_support(phi, basic, y, eps, signs, anchor);
  }

  const VectorXd qty = qr.householderQ().transpose() * y;
  VectorXd x_s = r.solve(qty.head(s));
  VectorXd sign_s(s);
  VectorXd w;
  double lambda = 1.0;
  if (eps == 0.0) {
    for (Index j = 0; j < s; ++j) {
      if (x_s(j) == 0.0) return fit;
      sign_s(j) = x_s(j) > 0.0 ? 1.0 : -1.0;
    }
    w = r.transpose().solve(sign_s);
  } else {
    for (Index j = 0; j < s; ++j) sign_s(j) = signs(support[j]);
    w = r.transpose().solve(sign_s);
    const double ls_residual2 = qty.tail(n - s).squaredNorm();
    const double slack = eps * eps - ls_residual2;
    if (!(slack > 0.0)) return fit;
    lambda = std::sqrt(slack) / w.norm();
    x_s -= lambda * r.solve(w);
    for (Index j = 0; j < s; ++j) {
      if (x_s(j) * sign_s(j) <= 0.0) return fit;
    }
  }

  fit.x = VectorXd::Zero(phi.cols());
  for (Index j = 0; j < s; ++j) fit.x(support[j]) = x_s(j);
  const VectorXd residual_vec = y - phi * fit.x;
  fit.residual = residual_vec.norm();
  if (eps == 0.0) {
    VectorXd padded = VectorXd::Zero(n);
    padded.head(s) = w;
    fit.nu = qr.householderQ() * padded;
  } else {
    fit.nu = residual_vec / lambda;
  }
  auto gap_of = [&](const VectorXd& nu) {
    const VectorXd correlations = phi.transpose() * nu;
    return std::max(0.0, correlations.lpNorm<Eigen::Infinity>() - 1.0);
  };
  fit.gap = gap_of(fit.nu);
  if (eps == 0.0 && anchor.size() == n && fit.gap > 0.0) {
    // nu = anchor + Q [R^{-T} (s - Phi_S^T anchor); 0]
    VectorXd padded = VectorXd::Zero(n);
    padded.head(s) = r.transpose().solve(sign_s - phi_s.transpose() * anchor);
    const VectorXd nu = anchor + qr.householderQ() * padded;
    const double gap = gap_of(nu);
    if (gap < fit.gap) {
      fit.nu = nu;
      fit.gap = gap;
    }
  }
  fit.ok = true;
  return fit;
}

// Least-squares refits on a superset of the true support leave round-off
// sized coefficients whose signs are arbitrary; drop them and refit.
SupportFit fit_support_pruned(const RowMatrix& phi, std::vector<Index> support,
                              const VectorXd& y, const VectorXd& anchor) {
  SupportFit fit = fit_support(phi, support, y, 0.0, VectorXd(), anchor);
  if (!fit.ok) return fit;
  const double cutoff = 1e-9 * fit.x.lpNorm<Eigen::Infinity>();
  std::vector<Index> kept;
  for (Index j : support)
    if (std::abs(fit.x(j)) > cutoff) kept.push_back(j);
  if (kept.size() == support.size() || kept.empty()) return fit;
  SupportFit pruned = fit_support(phi, kept, y, 0.0, VectorXd(), anchor);
  return pruned.ok && pruned.gap <= fit.gap ? pruned : fit;
}

// Supports to try once the iteration has stopped: the exact support of the
// iterate, then its entries above a ladder of relative magnitudes (the
// iterate carries small spurious entries until it is fully converged).
std::vector<std::vector<Index>> final_supports(const VectorXd& v, Index max_size) {
  std::vector<std::vector<Index>> out;
  const double top = v.lpNorm<Eigen::Infinity>();
  if (top == 0.0) return out;
  for (double level : {0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2}) {
    std::vector<Index> s;
    for (Index i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) > level * top) s.push_back(i);
    if (static_cast<Index>(s.size()) > max_size) continue;
    if (out.empty() || out.back() != s) out.push_back(std::move(s));
  }
  return out;
}

RecoveryResult make_result(const RowMatrix& phi, const VectorXd& y, VectorXd x,
                           std::size_t iterations) {
  RecoveryResult result;
  result.objective = x.lpNorm<1>();
  result.residual = (phi * x - y).norm();
  result.x_star = std::move(x);
  result.iterations = iterations;
  return result;
}

void check_inputs(const RowMatrix& phi, const VectorXd& y, const SolverOptions& options) {
  if (y.size() != phi.rows()) {
    throw ValidationError("measurement vector length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(phi.rows()) + " rows");
  }
  if (!y.allFinite()) throw ValidationError("measurement vector has non-finite entries");
  if (!(options.tol > 0.0)) throw ValidationError("solver tolerance must be positive");
  if (!(options.penalty > 0.0)) throw ValidationError("ADMM penalty must be positive");
}

// Tracks the support of the sparse iterate and decides when a refit is
// worth trying: the support must be unchanged for a few iterations and
// differ from the last support already tried.
class SupportWatch {
 public:
  bool update(const VectorXd& sparse) {
    std::vector<Index> current = support_of(sparse);
    if (current == previous_) {
      ++stable_;
    } else {
      stable_ = 0;
      previous_ = std::move(current);
    }
    return stable_ >= 3 && previous_ != attempted_ && !previous_.empty();
  }
  const std::vector<Index>& support() const { return previous_; }
  void mark_attempted() { attempted_ = previous_; }

 private:
  std::vector<Index> previous_;
  std::vector<Index> attempted_;
  int stable_ = 0;
};

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

L1Solver::L1Solver(const MeasurementMatrix& phi) : phi_(phi.entries()) {
  const MatrixXd gram = phi_ * phi_.transpose();
  const VectorXd lambda = symmetric_eigenvalues(gram);
  const double lmax = lambda(lambda.size() - 1);
  const double lmin = lambda(0);
  sigma_max_ = std::sqrt(std::max(lmax, 0.0));
  if (phi_.rows() > phi_.cols()) {
    sigma_min_ = 0.0;
  } else if (lmax > 0.0 && lmin >= 1e-6 * lmax) {
    sigma_min_ = std::sqrt(lmin);
  } else {
    sigma_min_ = singular_values_bidiagonal(phi_)(0);
  }
  if (sigma_min_ < kRankThreshold) {
    throw SolverError("measurement matrix is rank deficient (sigma_min = " +
                      std::to_string(sigma_min_) +
                      "); the affine projection is unreliable");
  }
  gram_factor_.compute(gram);
  if (gram_factor_.info() != Eigen::Success) {
    throw SolverError("Cholesky factorisation of Phi Phi^T failed");
  }
}

RecoveryResult L1Solver::basis_pursuit(const VectorXd& y, const SolverOptions& options) const {
  check_inputs(phi_, y, options);
  const Index N = phi_.cols();
  const double feas_tol = options.tol * std::max(1.0, y.norm());
  if (y.norm() == 0.0) {
    RecoveryResult zero = make_result(phi_, y, VectorXd::Zero(N), 0);
    zero.status = SolveStatus::converged;
    zero.certificate_gap = 0.0;
    return zero;
  }
  const double rho = options.penalty;
  const double stop = options.tol * std::sqrt(static_cast<double>(N));

  VectorXd x = VectorXd::Zero(N), z = VectorXd::Zero(N), u = VectorXd::Zero(N);
  VectorXd v(N), z_old(N);
  SupportWatch watch;
  std::size_t it = 0;
  bool stopped = false;

  // rho u approximates a subgradient of ||.||_1 at the solution; its
  // least-squares preimage under Phi^T anchors the dual vector.
  auto try_refit = [&](const std::vector<Index>& support) -> std::optional<SupportFit> {
    const VectorXd anchor = gram_factor_.solve(phi_ * (rho * u));
    SupportFit fit = fit_support_pruned(phi_, support, y, anchor);
    if (fit.ok && fit.residual <= feas_tol && fit.gap <= options.certificate_tol) return fit;
    return std::nullopt;
  };

  auto certified = [&](SupportFit& fit) {
    RecoveryResult result = make_result(phi_, y, std::move(fit.x), it);
    result.status = SolveStatus::converged;
    result.certificate_gap = fit.gap;
    return result;
  };
  // Returns true once the residuals fall below `threshold`.
  auto iterate = [&](double threshold, std::optional<SupportFit>& found) {
    while (it < options.max_iter) {
      ++it;
      v = z - u;
      const VectorXd correction = gram_factor_.solve(phi_ * v - y);
      x = v - phi_.transpose() * correction;
      z_old = z;
      z = soft_threshold(x + u, 1.0 / rho);
      u += x - z;

      if (options.polish && watch.update(z)) {
        watch.mark_attempted();
        if ((found = try_refit(watch.support()))) return true;
      }
      const double primal = (x - z).norm();
      const double dual = rho * (z - z_old).norm();
      if (primal <= threshold && dual <= threshold) return true;
    }
    return false;
  };
  auto final_refit = [&]() -> std::optional<SupportFit> {
    for (const auto& support : final_supports(z, phi_.rows())) {
      if (auto fit = try_refit(support)) return fit;
    }
    return std::nullopt;
  };

  std::optional<SupportFit> found;
  stopped = iterate(stop, found);
  if (found) return certified(*found);
  if (options.polish) {
    if ((found = final_refit())) return certified(*found);
    // Near-degenerate problems stop before the support has settled; keep
    // going with a tighter threshold while refits are still being tried.
    if (stopped && iterate(stop * 1e-3, found) && !found) found = final_refit();
    if (found) return certified(*found);
  }
  RecoveryResult result = make_result(phi_, y, std::move(x), it);
  result.status = stopped && result.residual <= feas_tol ? SolveStatus::converged
                                                         : SolveStatus::max_iter;
  return result;
}

RecoveryResult L1Solver::bpdn(const VectorXd& y, double eps, const SolverOptions& options) const {
  check_inputs(phi_, y, options);
  if (!(eps >= 0.0)) throw ValidationError("bpdn: eps must be nonnegative");
  if (eps == 0.0) return basis_pursuit(y, options);
  const Index N = phi_.cols();
  const double y_norm = y.norm();
  if (eps >= y_norm) {
    RecoveryResult zero = make_result(phi_, y, VectorXd::Zero(N), 0);
    zero.status = SolveStatus::converged;
    zero.certificate_gap = 0.0;
    return zero;
  }
  const double feas_tol = eps + options.tol * std::max(1.0, y_norm);
  const double rho = options.penalty;
  const double step = 0.9 / (rho * sigma_max_ * sigma_max_);
  const double stop = options.tol * std::sqrt(static_cast<double>(N));

  auto project_ball = [&](const VectorXd& p) -> VectorXd {
    const VectorXd d = p - y;
    const double norm = d.norm();
    if (norm <= eps) return p;
    return y + (eps / norm) * d;
  };

  VectorXd x = VectorXd::Zero(N);
  VectorXd phix = VectorXd::Zero(phi_.rows());
  VectorXd range = project_ball(phix);
  VectorXd u = VectorXd::Zero(phi_.rows());
  SupportWatch watch;
  std::size_t it = 0;
  bool stopped = false;

  auto try_refit = [&](const std::vector<Index>& support) -> std::optional<SupportFit> {
    VectorXd signs = x.unaryExpr([](double a) { return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0); });
    SupportFit fit = fit_support(phi_, support, y, eps, signs);
    if (fit.ok && fit.residual <= feas_tol && fit.gap <= options.certificate_tol) return fit;
    return std::nullopt;
  };

  while (it < options.max_iter) {
    ++it;
    const VectorXd gradient = phi_.transpose() * (phix - range + u);
    x = soft_threshold(x - step * rho * gradient, step);
    phix = phi_ * x;
    const VectorXd range_old = range;
    range = project_ball(phix + u);
    u += phix - range;

    if (options.polish && watch.update(x)) {
      watch.mark_attempted();
      if (auto fit = try_refit(watch.support())) {
        RecoveryResult result = make_result(phi_, y, std::move(fit->x), it);
        result.status = SolveStatus::converged;
        result.certificate_gap = fit->gap;
        return result;
      }
    }
    const double primal = (phix - range).norm();
    const double dual = rho * (phi_.transpose() * (range - range_old)).norm();
    if (primal <= stop && dual <= stop) {
      stopped = true;
      break;
    }
  }

  if (options.polish) {
    for (const auto& support : final_supports(x, phi_.rows())) {
      if (auto fit = try_refit(support)) {
        RecoveryResult result = make_result(phi_, y, std::move(fit->x), it);
        result.status = SolveStatus::converged;
        result.certificate_gap = fit->gap;
        return result;
      }
    }
  }
  RecoveryResult result = make_result(phi_, y, std::move(x), it);
  result.status = stopped && result.residual <= feas_tol ? SolveStatus::converged
                                                         : SolveStatus::max_iter;
  return result;
}

RecoveryResult basis_pursuit(const MeasurementMatrix& phi, const VectorXd& y, double tol,
                             std::size_t max_iter) {
  SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return L1Solver(phi).basis_pursuit(y, options);
}

RecoveryResult bpdn(const MeasurementMatrix& phi, const VectorXd& y, double eps, double tol,
                    std::size_t max_iter) {
  SolverOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return L1Solver(phi).bpdn(y, eps, options);
}

RecoveryResult lp_oracle(const MeasurementMatrix& phi, const VectorXd& y) {
  const Index n = static_cast<Index>(phi.rows());
  const Index N = static_cast<Index>(phi.cols());
  if (phi.rows() > kLpMaxRows || phi.cols() > kLpMaxCols) {
    throw ValidationError("lp_oracle: instance exceeds the dense simplex guard (n <= " +
                          std::to_string(kLpMaxRows) + ", N <= " +
                          std::to_string(kLpMaxCols) + ")");
  }
  if (y.size() != n) throw ValidationError("lp_oracle: measurement length mismatch");
  MatrixXd a(n, 2 * N);
  a.leftCols(N) = phi.entries();
  a.rightCols(N) = -phi.entries();
  const VectorXd c = VectorXd::Ones(2 * N);
  const LpResult lp = solve_standard_form(a, y, c);

  RecoveryResult result;
  result.iterations = lp.iterations;
  if (lp.status == LpStatus::infeasible) {
    result.status = SolveStatus::infeasible;
    result.x_star = VectorXd::Zero(N);
    result.residual = y.norm();
    return result;
  }
  if (lp.status != LpStatus::optimal) {
    throw SolverError("lp_oracle: simplex stopped without an optimal basis");
  }
  VectorXd x = lp.x.head(N) - lp.x.tail(N);
  result = make_result(phi.entries(), y, std::move(x), lp.iterations);
  result.status = SolveStatus::converged;
  const VectorXd correlations = phi.entries().transpose() * lp.duals;
  result.certificate_gap = std::max(0.0, correlations.lpNorm<Eigen::Infinity>() - 1.0);
  return result;
}

namespace {

// min t s.t. Phi_S^T nu = s, |phi_j^T nu| <= t off the support. Returns an
// empty vector when the LP is infeasible.
VectorXd chebyshev_certificate(const RowMatrix& phi, const std::vector<Index>& support,
                               const VectorXd& signs) {
  const Index n = phi.rows();
  const Index N = phi.cols();
  std::vector<bool> on(N, false);
  for (Index j : support) on[j] = true;
  std::vector<Index> off;
  for (Index j = 0; j < N; ++j)
    if (!on[j]) off.push_back(j);
  const Index s = static_cast<Index>(support.size());
  const Index q = static_cast<Index>(off.size());
  // Columns: nu+ (n), nu- (n), t, slacks (2q).
  const Index cols = 2 * n + 1 + 2 * q;
  MatrixXd a = MatrixXd::Zero(s + 2 * q, cols);
  VectorXd b = VectorXd::Zero(s + 2 * q);
  for (Index i = 0; i < s; ++i) {
    a.row(i).segment(0, n) = phi.col(support[i]).transpose();
    a.row(i).segment(n, n) = -phi.col(support[i]).transpose();
    b(i) = signs(i);
  }
  for (Index i = 0; i < q; ++i) {
    const Index up = s + 2 * i;
    const Index down = up + 1;
    a.row(up).segment(0, n) = phi.col(off[i]).transpose();
    a.row(up).segment(n, n) = -phi.col(off[i]).transpose();
    a(up, 2 * n) = -1.0;
    a(up, 2 * n + 1 + 2 * i) = 1.0;
    a.row(down).segment(0, n) = -phi.col(off[i]).transpose();
    a.row(down).segment(n, n) = phi.col(off[i]).transpose();
    a(down, 2 * n) = -1.0;
    a(down, 2 * n + 2 + 2 * i) = 1.0;
  }
  VectorXd c = VectorXd::Zero(cols);
  c(2 * n) = 1.0;
  const LpResult lp = solve_standard_form(a, b, c);
  if (lp.status != LpStatus::optimal) return VectorXd();
  return lp.x.segment(0, n) - lp.x.segment(n, n);
}

}  // namespace

CertificateCheck dual_certificate_check(const MeasurementMatrix& phi, const VectorXd& x_star,
                                        double tol) {
  const RowMatrix& a = phi.entries();
  if (x_star.size() != a.cols()) {
    throw ValidationError("dual_certificate_check: x_star length mismatch");
  }
  CertificateCheck check;
  const double cutoff = 1e-9 * std::max(1.0, x_star.lpNorm<Eigen::Infinity>());
  std::vector<Index> support;
  for (Index i = 0; i < x_star.size(); ++i)
    if (std::abs(x_star(i)) > cutoff) support.push_back(i);
  if (support.empty()) {
    check.valid = true;
    check.nu = VectorXd::Zero(a.rows());
    return check;
  }
  const Index s = static_cast<Index>(support.size());
  MatrixXd phi_s_t(s, a.rows());
  VectorXd signs(s);
  for (Index j = 0; j < s; ++j) {
    phi_s_t.row(j) = a.col(support[j]).transpose();
    signs(j) = x_star(support[j]) > 0.0 ? 1.0 : -1.0;
  }

  auto evaluate = [&](const VectorXd& nu) {
    CertificateCheck c;
    c.nu = nu;
    c.sign_mismatch = (phi_s_t * nu - signs).lpNorm<Eigen::Infinity>();
    c.certificate_gap =
        std::max(0.0, (a.transpose() * nu).lpNorm<Eigen::Infinity>() - 1.0);
    c.valid = c.sign_mismatch <= tol && c.certificate_gap <= tol;
    return c;
  };

  check = evaluate(phi_s_t.completeOrthogonalDecomposition().solve(signs));
  if (check.valid) return check;

  if (phi.rows() <= kLpMaxRows && phi.cols() <= kLpMaxCols && s <= a.rows()) {
    const VectorXd nu = chebyshev_certificate(a, support, signs);
    if (nu.size()) {
      CertificateCheck refined = evaluate(nu);
      if (refined.valid || (refined.sign_mismatch <= tol &&
                            refined.certificate_gap < check.certificate_gap)) {
        check = refined;
      }
    }
  }
  return check;
}

}  // namespace mixcs
