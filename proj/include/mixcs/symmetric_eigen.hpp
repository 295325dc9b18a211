#pragma once

#include "mixcs/matrix.hpp"

namespace mixcs {

// Symmetric tridiagonal matrix: diag has length m, offdiag length m-1 with
// offdiag[i] coupling i and i+1.
struct Tridiagonal {
  VectorXd diag;
  VectorXd offdiag;
};

// Householder reduction Q^T A Q = T. Only the lower triangle of `a` is read.
Tridiagonal tridiagonalize(MatrixXd a);

// Eigenvalues of T in ascending order (implicit-shift QL, eigenvalues only).
// Throws SolverError if an eigenvalue fails to converge in 60 sweeps.
VectorXd tridiagonal_eigenvalues(const Tridiagonal& t);

// Eigenvalues of a symmetric matrix, ascending. No symmetry check: only the
// lower triangle is used.
VectorXd symmetric_eigenvalues(const MatrixXd& a);

// Householder bidiagonalization of an m x p matrix with m >= p. Returns the
// diagonal (length p) and superdiagonal (length p-1) of the upper bidiagonal
// factor.
struct Bidiagonal {
  VectorXd diag;
  VectorXd superdiag;
};
Bidiagonal bidiagonalize(MatrixXd a);

// Singular values of an arbitrary matrix, ascending, via bidiagonalization
// and the Golub-Kahan tridiagonal (zero diagonal, eigenvalues +/- sigma).
VectorXd singular_values_bidiagonal(const MatrixXd& a);

}  // namespace mixcs
