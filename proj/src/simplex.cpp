#include "mixcs/simplex.hpp"

#include <cmath>
#include <limits>

#include "mixcs/error.hpp"

namespace mixcs {
namespace {

class RevisedSimplex {
 public:
  RevisedSimplex(const MatrixXd& A, const VectorXd& b, const SimplexOptions& options)
      : m_(A.rows()), n_(A.cols()), options_(options) {
    // Columns [0, n) are structural, [n, n + m) artificial.
    a_.resize(m_, n_ + m_);
    a_.leftCols(n_) = A;
    a_.rightCols(m_).setIdentity();
    b_ = b;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b_(i) < 0.0) {
        b_(i) = -b_(i);
        a_.row(i).head(n_) *= -1.0;
      }
    }
    basis_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
    binv_ = MatrixXd::Identity(m_, m_);
    xb_ = b_;
  }

  // Runs simplex iterations for cost vector `cost` (length n + m). Columns
  // with allowed[j] == false never enter.
  LpStatus run(const VectorXd& cost, const std::vector<bool>& allowed) {
    for (;;) {
      if (iterations_ >= options_.max_iterations) return LpStatus::iteration_limit;
      VectorXd cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i]);
      const Eigen::RowVectorXd pi = cb.transpose() * binv_;

      std::vector<bool> in_basis(n_ + m_, false);
      for (auto j : basis_) in_basis[j] = true;
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (in_basis[j] || !allowed[j]) continue;
        const double reduced = cost(j) - pi.dot(a_.col(j));
        if (reduced < -options_.optimality_tol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::optimal;

      const VectorXd column = binv_ * a_.col(entering);
      Eigen::Index leaving = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (column(i) <= options_.pivot_tol) continue;
        const double ratio = std::max(xb_(i), 0.0) / column(i);
        if (leaving < 0) {
          best = ratio;
          leaving = i;
          continue;
        }
        const double slack = 1e-12 * (1.0 + best);
        if (ratio < best - slack ||
            (ratio <= best + slack && basis_[i] < basis_[leaving])) {
          best = std::min(best, ratio);
          leaving = i;
        }
      }
      if (leaving < 0) {
        // With a drifted inverse a column whose true reduced cost is zero can
        // look improving; only a fresh factorisation may declare a ray.
        if (fresh_) return LpStatus::unbounded;
        refactor();
        continue;
      }
      pivot(leaving, entering, column);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index entering, const VectorXd& column) {
    ++iterations_;
    basis_[row] = entering;
    fresh_ = false;
    if (iterations_ % options_.refactor_every == 0) {
      refactor();
      return;
    }
    const double p = column(row);
    binv_.row(row) /= p;
    xb_(row) /= p;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row || column(i) == 0.0) continue;
      binv_.row(i) -= column(i) * binv_.row(row);
      xb_(i) -= column(i) * xb_(row);
    }
  }

  void refactor() {
    MatrixXd basis_matrix(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_matrix.col(i) = a_.col(basis_[i]);
    Eigen::PartialPivLU<MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    fresh_ = true;
  }

  // Pivots basic artificials at level zero out of the basis where some
  // structural column has a nonzero entry in their row. Rows where none has
  // are redundant; their artificial stays basic at zero.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[r] < static_cast<std::size_t>(n_)) continue;
      std::vector<bool> in_basis(n_, false);
      for (auto j : basis_)
        if (j < static_cast<std::size_t>(n_)) in_basis[j] = true;
      const Eigen::RowVectorXd row = binv_.row(r) * a_.leftCols(n_);
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (in_basis[j] || std::abs(row(j)) <= options_.pivot_tol) continue;
        pivot(r, j, binv_ * a_.col(j));
        break;
      }
    }
  }

  LpResult solve(const VectorXd& c) {
    LpResult result;
    VectorXd phase1 = VectorXd::Zero(n_ + m_);
    phase1.tail(m_).setOnes();
    std::vector<bool> allowed(n_ + m_, true);
    LpStatus status = run(phase1, allowed);
    if (status == LpStatus::iteration_limit) {
      result.status = status;
      result.iterations = iterations_;
      return result;
    }
    refactor();
    double infeasibility = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] >= static_cast<std::size_t>(n_)) infeasibility += std::max(xb_(i), 0.0);
    if (infeasibility > options_.feasibility_tol * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) {
      result.status = LpStatus::infeasible;
      result.iterations = iterations_;
      return result;
    }
    drive_out_artificials();

    VectorXd phase2 = VectorXd::Zero(n_ + m_);
    phase2.head(n_) = c;
    for (Eigen::Index j = n_; j < n_ + m_; ++j) allowed[j] = false;
    status = run(phase2, allowed);
    refactor();

    result.status = status;
    result.iterations = iterations_;
    result.basis = basis_;
    result.x = VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < static_cast<std::size_t>(n_)) result.x(basis_[i]) = std::max(xb_(i), 0.0);
    }
    result.objective = c.dot(result.x);
    VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb(i) = phase2(basis_[i]);
    result.duals = (cb.transpose() * binv_).transpose();
    // Undo the row sign flips so the multipliers refer to the caller's rows.
    for (Eigen::Index i = 0; i < m_; ++i)
      if (flipped(i)) result.duals(i) = -result.duals(i);
    return result;
  }

  void set_flips(const VectorXd& original_b) { original_b_ = original_b; }

 private:
  bool flipped(Eigen::Index i) const { return original_b_.size() && original_b_(i) < 0.0; }

  Eigen::Index m_, n_;
  SimplexOptions options_;
  MatrixXd a_;
  VectorXd b_;
  VectorXd original_b_;
  std::vector<std::size_t> basis_;
  MatrixXd binv_;
  VectorXd xb_;
  std::size_t iterations_ = 0;
  bool fresh_ = true;
};

}  // namespace

LpResult solve_standard_form(const MatrixXd& A, const VectorXd& b, const VectorXd& c,
                             const SimplexOptions& options) {
  if (A.rows() != b.size() || A.cols() != c.size()) {
    throw ValidationError("solve_standard_form: dimension mismatch");
  }
  if (A.rows() == 0) {
    LpResult result;
    result.x = VectorXd::Zero(A.cols());
    const bool bounded = (c.array() >= 0.0).all();
    result.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
    return result;
  }
  RevisedSimplex simplex(A, b, options);
  simplex.set_flips(b);
  return simplex.solve(c);
}

}  // namespace mixcs
