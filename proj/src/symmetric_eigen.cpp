#include "mixcs/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixcs/error.hpp"

namespace mixcs {
namespace {

// Reflector H = I - beta v v^T with H x = alpha e_1. beta = 0 when x is
// already a multiple of e_1.
struct Householder {
  VectorXd v;
  double beta = 0.0;
  double alpha = 0.0;
};

Householder make_householder(const Eigen::Ref<const VectorXd>& x) {
  Householder h;
  h.v = x;
  const double tail = x.size() > 1 ? x.tail(x.size() - 1).squaredNorm() : 0.0;
  if (tail == 0.0) {
    h.alpha = x(0);
    return h;
  }
  const double norm = std::sqrt(x(0) * x(0) + tail);
  h.alpha = x(0) >= 0.0 ? -norm : norm;
  h.v(0) = x(0) - h.alpha;
  h.beta = 2.0 / h.v.squaredNorm();
  return h;
}

}  // namespace

Tridiagonal tridiagonalize(MatrixXd a) {
  const Eigen::Index n = a.rows();
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    const Householder h = make_householder(a.col(k).tail(m));
    t.diag(k) = a(k, k);
    t.offdiag(k) = h.alpha;
    if (h.beta == 0.0) continue;
    auto block = a.bottomRightCorner(m, m);
    VectorXd p = h.beta * (block.selfadjointView<Eigen::Lower>() * h.v);
    const VectorXd w = p - (0.5 * h.beta * p.dot(h.v)) * h.v;
    block.selfadjointView<Eigen::Lower>().rankUpdate(h.v, w, -1.0);
  }
  if (n >= 2) {
    t.diag(n - 2) = a(n - 2, n - 2);
    t.offdiag(n - 2) = a(n - 1, n - 2);
  }
  if (n >= 1) t.diag(n - 1) = a(n - 1, n - 1);
  return t;
}

VectorXd tridiagonal_eigenvalues(const Tridiagonal& t) {
  const Eigen::Index n = t.diag.size();
  VectorXd d = t.diag;
  if (n <= 1) return d;
  // e(i) couples i and i+1; e(n-1) = 0 terminates the deflation scan.
  VectorXd e = VectorXd::Zero(n);
  e.head(n - 1) = t.offdiag;

  const double eps = std::numeric_limits<double>::epsilon();
  double shift_total = 0.0;
  double tst1 = 0.0;
  for (Eigen::Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Eigen::Index m = l;
    while (m < n - 1 && std::abs(e(m)) > eps * tst1) ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) {
          throw SolverError("tridiagonal QL did not converge");
        }
        // Wilkinson-style shift from the leading 2x2 block.
        double g = d(l);
        double p = (d(l + 1) - g) / (2.0 * e(l));
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const double dl1 = d(l + 1);
        double h = g - d(l);
        for (Eigen::Index i = l + 2; i < n; ++i) d(i) -= h;
        shift_total += h;

        // Implicit QL sweep from m back to l.
        p = d(m);
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e(l + 1);
        double s = 0.0, s2 = 0.0;
        for (Eigen::Index i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += shift_total;
    e(l) = 0.0;
  }
  std::sort(d.data(), d.data() + n);
  return d;
}

VectorXd symmetric_eigenvalues(const MatrixXd& a) {
  if (a.rows() != a.cols()) throw ValidationError("eigenvalues need a square matrix");
  if (a.rows() == 0) return VectorXd();
  return tridiagonal_eigenvalues(tridiagonalize(a));
}

Bidiagonal bidiagonalize(MatrixXd a) {
  const Eigen::Index m = a.rows();
  const Eigen::Index p = a.cols();
  if (m < p) throw ValidationError("bidiagonalize expects rows >= cols");
  Bidiagonal b;
  b.diag.resize(p);
  b.superdiag.resize(std::max<Eigen::Index>(p - 1, 0));
  for (Eigen::Index k = 0; k < p; ++k) {
    // Left reflector zeroes column k below the diagonal.
    const Householder left = make_householder(a.col(k).tail(m - k));
    b.diag(k) = left.alpha;
    if (left.beta != 0.0 && k + 1 < p) {
      auto block = a.bottomRightCorner(m - k, p - k - 1);
      const Eigen::RowVectorXd vt_block = left.v.transpose() * block;
      block.noalias() -= left.beta * left.v * vt_block;
    }
    if (k + 1 >= p) continue;
    // Right reflector zeroes row k right of the superdiagonal.
    const VectorXd row = a.row(k).tail(p - k - 1).transpose();
    const Householder right = make_householder(row);
    b.superdiag(k) = right.alpha;
    if (right.beta != 0.0 && k + 1 < m) {
      auto block = a.bottomRightCorner(m - k - 1, p - k - 1);
      const VectorXd block_v = block * right.v;
      block.noalias() -= right.beta * block_v * right.v.transpose();
    }
  }
  return b;
}

VectorXd singular_values_bidiagonal(const MatrixXd& a) {
  if (a.size() == 0) return VectorXd();
  const Bidiagonal b =
      a.rows() >= a.cols() ? bidiagonalize(a) : bidiagonalize(a.transpose());
  const Eigen::Index p = b.diag.size();
  // Golub-Kahan form: zero diagonal, off-diagonal d0, f0, d1, f1, ..., d_{p-1}.
  Tridiagonal gk;
  gk.diag = VectorXd::Zero(2 * p);
  gk.offdiag.resize(2 * p - 1);
  for (Eigen::Index i = 0; i < p; ++i) {
    gk.offdiag(2 * i) = b.diag(i);
    if (i + 1 < p) gk.offdiag(2 * i + 1) = b.superdiag(i);
  }
  const VectorXd eig = tridiagonal_eigenvalues(gk);
  VectorXd sigma = eig.tail(p).cwiseAbs();
  std::sort(sigma.data(), sigma.data() + p);
  return sigma;
}

}  // namespace mixcs
