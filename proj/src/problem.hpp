#pragma once

// Two-stage stochastic LP with fixed recourse:
//   min c.x + E[Q(x, xi)]   over x in X = {x >= 0 : A x = b}
//   Q(x, xi)  = min { q.y : W y = h - T x, y >= 0 },  xi = (T, h)
// W and q may come in finitely many weighted scenario variants; the
// distribution of (T, h) is shared across them.

#include <string>
#include <vector>

#include "measure.hpp"

namespace gapm {

struct RecourseScenario {
  MatrixXd W;  // l x m2
  VectorXd q;  // m2
  double weight = 1.0;
};

struct TwoStageProblem {
  std::string name;
  VectorXd c;
  MatrixXd A;  // 0 rows when X is just the nonnegative orthant
  VectorXd b;
  std::vector<RecourseScenario> recourse;
  XiDistribution dist;

  Index n() const { return c.size(); }
  Index l() const { return dist.l(); }
  std::size_t num_scenarios() const { return recourse.size(); }

  // dimensions, weights, and nonemptiness of every dual polyhedron
  // D_s = {lambda : W_s^T lambda <= q_s}; throws ErrorCode::validation
  void validate() const;
};

}  // namespace gapm
