#pragma once

// Second-stage evaluation and the two master problems: the aggregated
// master over a partition's cells and the cutting-plane master.

#include "lp.hpp"
#include "problem.hpp"

namespace gapm {

// Q_s(x, xi) for one scenario at explicit (T, h); the optimal dual lambda
// comes back in y_eq and certifies Q = lambda.(h - Tx)
LPResult solve_recourse(const TwoStageProblem& p, std::size_t scenario,
                        const VectorXd& x, const MatrixXd& T, const VectorXd& h);

struct CutPool {
  struct OptimalityCut {
    VectorXd g;     // theta >= rhs + g.x
    double rhs;
  };
  struct FeasibilityCut {
    VectorXd f;     // f.x <= fbar
    double fbar;
  };
  std::vector<OptimalityCut> opt;
  std::vector<FeasibilityCut> feas;
};

struct MasterSolution {
  double value = 0.0;  // c.x + aggregated recourse (or + theta)
  VectorXd x;
  double theta = 0.0;  // cutting-plane master only
  // cutting-plane master only: too few cuts to bound the problem; x is a
  // vertex and ray an improving recession direction of X under the cuts
  bool unbounded = false;
  VectorXd ray;
};

// min c.x + sum_P sum_s p_P w_s q_s.y_Ps  s.t. x in X and
// Tbar_P x + W_s y_Ps = hbar_P per cell and scenario. Infeasible or
// unbounded masters throw. Feasibility cuts from `cuts` are honored.
MasterSolution solve_master(const TwoStageProblem& p,
                            const std::vector<CellStats>& cells,
                            const CutPool* cuts = nullptr);

// min c.x + theta over X with theta >= theta_lower and the pool's cuts;
// infeasible throws, unbounded comes back flagged with vertex and ray
MasterSolution solve_master_cuts(const TwoStageProblem& p, const CutPool& cuts,
                                 double theta_lower);

struct VPResult {
  bool feasible = true;
  double value = 0.0;  // V_P(x)
  // optimal recourse duals, [cell][scenario]
  std::vector<std::vector<VectorXd>> duals;
  // set when some cell's recourse is infeasible
  std::size_t bad_cell = 0, bad_scenario = 0;
  VectorXd farkas;  // certificate sigma: sigma.W <= 0, sigma.(hbar-Tbar x) > 0
};

// V_P(x) = sum_P p_P sum_s w_s Q_s(x, xibar_P) over the given cell stats
VPResult eval_VP(const TwoStageProblem& p, const VectorXd& x,
                 const std::vector<CellStats>& cells);

// exact subgradient: g = sum_P p_P sum_s w_s (-Tbar_P^T lambda_Ps)
VectorXd subgradient_VP(const TwoStageProblem& p,
                        const std::vector<CellStats>& cells, const VPResult& vp);

}  // namespace gapm
