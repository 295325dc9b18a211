#pragma once

#include <vector>

#include "mixcs/matrix.hpp"

namespace mixcs {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  VectorXd x;           // primal solution, length = number of columns
  double objective = 0.0;
  VectorXd duals;       // simplex multipliers c_B^T B^{-1} of the final basis
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-9;
  std::size_t max_iterations = 50000;
  std::size_t refactor_every = 32;
};

// min c^T x subject to A x = b, x >= 0. Dense revised simplex with an
// explicit basis inverse, two phases (artificial variables) and Bland's
// rule for both the entering and the leaving variable.
LpResult solve_standard_form(const MatrixXd& A, const VectorXd& b, const VectorXd& c,
                             const SimplexOptions& options = {});

}  // namespace mixcs
