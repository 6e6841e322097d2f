#include "recourse.hpp"

#include <limits>

namespace gapm {

LPResult solve_recourse(const TwoStageProblem& p, std::size_t scenario,
                        const VectorXd& x, const MatrixXd& T,
                        const VectorXd& h) {
  require(scenario < p.num_scenarios(), ErrorCode::invalid_argument,
          "solve_recourse: scenario index");
  require(x.size() == p.n(), ErrorCode::dimension_mismatch,
          "solve_recourse: x size");
  const RecourseScenario& rs = p.recourse[scenario];
  LinearProgram lp;
  lp.c = rs.q;
  lp.A_eq = rs.W;
  lp.b_eq = h - T * x;
  lp.A_le.resize(0, rs.q.size());
  lp.b_le.resize(0);
  LPResult r = solve_lp(lp);
  require(r.status != LPResult::Status::unbounded, ErrorCode::unbounded,
          "solve_recourse: unbounded second stage (dual polyhedron empty?)");
  return r;
}

MasterSolution solve_master(const TwoStageProblem& p,
                            const std::vector<CellStats>& cells,
                            const CutPool* cuts) {
  require(!cells.empty(), ErrorCode::invalid_argument, "master: no cells");
  const Index n = p.n();
  const std::size_t S = p.num_scenarios();

  Index nv = n;
  std::vector<Index> yoff(cells.size() * S);
  for (std::size_t P = 0; P < cells.size(); ++P)
    for (std::size_t s = 0; s < S; ++s) {
      yoff[P * S + s] = nv;
      nv += p.recourse[s].q.size();
    }

  Index me = p.A.rows();
  for (std::size_t P = 0; P < cells.size(); ++P) me += static_cast<Index>(S) * p.l();
  const Index mle = cuts ? static_cast<Index>(cuts->feas.size()) : 0;

  LinearProgram lp;
  lp.c = VectorXd::Zero(nv);
  lp.c.head(n) = p.c;
  lp.A_eq = MatrixXd::Zero(me, nv);
  lp.b_eq.resize(me);
  lp.A_le = MatrixXd::Zero(mle, nv);
  lp.b_le.resize(mle);

  Index row = 0;
  if (p.A.rows() > 0) {
    lp.A_eq.topLeftCorner(p.A.rows(), n) = p.A;
    lp.b_eq.head(p.A.rows()) = p.b;
    row = p.A.rows();
  }
  for (std::size_t P = 0; P < cells.size(); ++P) {
    const CellStats& st = cells[P];
    require(st.defined, ErrorCode::invalid_argument,
            "master: undefined cell stats");
    for (std::size_t s = 0; s < S; ++s) {
      const RecourseScenario& rs = p.recourse[s];
      const Index m2 = rs.q.size();
      lp.A_eq.block(row, 0, p.l(), n) = st.mean_T;
      lp.A_eq.block(row, yoff[P * S + s], p.l(), m2) = rs.W;
      lp.b_eq.segment(row, p.l()) = st.mean_h;
      lp.c.segment(yoff[P * S + s], m2) = (st.prob * rs.weight) * rs.q;
      row += p.l();
    }
  }
  if (cuts)
    for (std::size_t i = 0; i < cuts->feas.size(); ++i) {
      lp.A_le.block(static_cast<Index>(i), 0, 1, n) =
          cuts->feas[i].f.transpose();
      lp.b_le(static_cast<Index>(i)) = cuts->feas[i].fbar;
    }

  LPResult r = solve_lp(lp);
  if (r.status == LPResult::Status::infeasible)
    fail(ErrorCode::infeasible, "master: infeasible (first stage + cells)");
  if (r.status == LPResult::Status::unbounded)
    fail(ErrorCode::unbounded, "master: unbounded, add first-stage bounds");
  MasterSolution out;
  out.value = r.value;
  out.x = r.x.head(n);
  return out;
}

MasterSolution solve_master_cuts(const TwoStageProblem& p, const CutPool& cuts,
                                 double theta_lower) {
  const Index n = p.n();
  LinearProgram lp;
  lp.c.resize(n + 1);
  lp.c.head(n) = p.c;
  lp.c(n) = 1.0;  // theta' = theta - theta_lower >= 0
  lp.A_eq = MatrixXd::Zero(p.A.rows(), n + 1);
  if (p.A.rows() > 0) lp.A_eq.leftCols(n) = p.A;
  lp.b_eq = p.b;
  const Index mle =
      static_cast<Index>(cuts.opt.size()) + static_cast<Index>(cuts.feas.size());
  lp.A_le = MatrixXd::Zero(mle, n + 1);
  lp.b_le.resize(mle);
  Index row = 0;
  for (const auto& cut : cuts.opt) {
    // theta >= rhs + g.x  <=>  g.x - theta' <= theta_lower - rhs
    lp.A_le.block(row, 0, 1, n) = cut.g.transpose();
    lp.A_le(row, n) = -1.0;
    lp.b_le(row) = theta_lower - cut.rhs;
    ++row;
  }
  for (const auto& cut : cuts.feas) {
    lp.A_le.block(row, 0, 1, n) = cut.f.transpose();
    lp.b_le(row) = cut.fbar;
    ++row;
  }

  LPResult r = solve_lp(lp);
  if (r.status == LPResult::Status::infeasible)
    fail(ErrorCode::infeasible, "master: infeasible first stage");
  MasterSolution out;
  if (r.status == LPResult::Status::unbounded) {
    out.unbounded = true;
    out.x = r.x.head(n);
    out.ray = r.ray.head(n);
    out.theta = theta_lower + r.x(n);
    out.value = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.x = r.x.head(n);
  out.theta = theta_lower + r.x(n);
  out.value = p.c.dot(out.x) + out.theta;
  return out;
}

VPResult eval_VP(const TwoStageProblem& p, const VectorXd& x,
                 const std::vector<CellStats>& cells) {
  VPResult vp;
  vp.duals.resize(cells.size());
  for (std::size_t P = 0; P < cells.size(); ++P) {
    const CellStats& st = cells[P];
    require(st.defined, ErrorCode::invalid_argument,
            "eval_VP: undefined cell stats");
    vp.duals[P].resize(p.num_scenarios());
    for (std::size_t s = 0; s < p.num_scenarios(); ++s) {
      LPResult r = solve_recourse(p, s, x, st.mean_T, st.mean_h);
      if (r.status == LPResult::Status::infeasible) {
        vp.feasible = false;
        vp.bad_cell = P;
        vp.bad_scenario = s;
        vp.farkas = r.farkas_eq;
        return vp;
      }
      vp.value += st.prob * p.recourse[s].weight * r.value;
      vp.duals[P][s] = r.y_eq;
    }
  }
  return vp;
}

VectorXd subgradient_VP(const TwoStageProblem& p,
                        const std::vector<CellStats>& cells,
                        const VPResult& vp) {
  require(vp.feasible, ErrorCode::invalid_argument,
          "subgradient_VP: V_P(x) is infinite here");
  require(vp.duals.size() == cells.size(), ErrorCode::dimension_mismatch,
          "subgradient_VP: duals do not match cells");
  VectorXd g = VectorXd::Zero(p.n());
  for (std::size_t P = 0; P < cells.size(); ++P)
    for (std::size_t s = 0; s < p.num_scenarios(); ++s)
      g -= cells[P].prob * p.recourse[s].weight *
           (cells[P].mean_T.transpose() * vp.duals[P][s]);
  return g;
}

}  // namespace gapm
