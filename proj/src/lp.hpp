#pragma once

// Dense two-phase simplex over
//   min c.x   s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0.
// Returns primal, duals per row block, and certificates: a Farkas vector for
// infeasible systems, an improving ray for unbounded ones. The final basis is
// refactorized through a fresh decomposition so reported values do not carry
// accumulated pivot error.

#include <Eigen/Dense>

#include "error.hpp"

namespace gapm {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LinearProgram {
  VectorXd c;
  MatrixXd A_eq;
  VectorXd b_eq;
  MatrixXd A_le;
  VectorXd b_le;

  Index nvars() const { return c.size(); }
  void check_consistent() const;
};

struct LPResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  double value = 0.0;
  VectorXd x;
  // duals with the sign convention: value = y_eq.b_eq + y_le.b_le and
  // c - A_eq^T y_eq - A_le^T y_le >= 0, y_le <= 0 (min problem)
  VectorXd y_eq, y_le;
  // infeasible: A_eq^T f_eq + A_le^T f_le <= 0, f_le <= 0,
  // f_eq.b_eq + f_le.b_le > 0
  VectorXd farkas_eq, farkas_le;
  // unbounded: feasible direction with c.ray < 0, over the original vars;
  // x then holds the vertex the ray departs from
  VectorXd ray;
};

// feasibility/optimality tolerance 1e-7 on normalized residuals; pivot
// tolerance 1e-9 internally
LPResult solve_lp(const LinearProgram& lp, double tol = 1e-7);

}  // namespace gapm
