#include "problem.hpp"

#include <cmath>

#include "lp.hpp"

namespace gapm {
namespace {

bool dual_nonempty(const RecourseScenario& s) {
  // feasibility of W^T lambda <= q with free lambda, via lambda = u - v
  const Index l = s.W.rows(), m2 = s.W.cols();
  LinearProgram lp;
  lp.c = VectorXd::Zero(2 * l);
  lp.A_eq.resize(0, 2 * l);
  lp.b_eq.resize(0);
  lp.A_le.resize(m2, 2 * l);
  lp.A_le << s.W.transpose(), -s.W.transpose();
  lp.b_le = s.q;
  return solve_lp(lp).status == LPResult::Status::optimal;
}

}  // namespace

void TwoStageProblem::validate() const {
  require(c.size() > 0, ErrorCode::validation, "problem: empty first stage");
  require(A.rows() == b.size(), ErrorCode::validation, "problem: A rows vs b");
  require(A.rows() == 0 || A.cols() == n(), ErrorCode::validation,
          "problem: A column count");
  require(dist.n() == n(), ErrorCode::validation,
          "problem: distribution n (" + std::to_string(dist.n()) +
              ") differs from first stage (" + std::to_string(n()) + ")");
  dist.validate();
  require(!recourse.empty(), ErrorCode::validation, "problem: no recourse");
  double wsum = 0;
  for (std::size_t s = 0; s < recourse.size(); ++s) {
    const RecourseScenario& rs = recourse[s];
    require(rs.W.rows() == l(), ErrorCode::validation,
            "problem: W row count in scenario " + std::to_string(s));
    require(rs.q.size() == rs.W.cols(), ErrorCode::validation,
            "problem: q size in scenario " + std::to_string(s));
    require(rs.weight > 0, ErrorCode::validation,
            "problem: scenario weights must be positive");
    wsum += rs.weight;
    require(dual_nonempty(rs), ErrorCode::validation,
            "problem: dual polyhedron of scenario " + std::to_string(s) +
                " is empty (q not attainable)");
  }
  require(std::abs(wsum - 1.0) <= 1e-9, ErrorCode::validation,
          "problem: scenario weights sum to " + std::to_string(wsum));
}

}  // namespace gapm
