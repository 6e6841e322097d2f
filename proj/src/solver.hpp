#pragma once

// The partition method: aggregate, solve, refine at the iterate, repeat.
// Also the cutting-plane baseline fed by exact evaluations on adapted
// partitions, and the worst-case iteration bound.

#include <functional>
#include <limits>

#include "partition.hpp"
#include "recourse.hpp"

namespace gapm {

struct SolveOptions {
  double eps = 1e-4;          // stop when z_upper - z_lower <= eps
  int max_iter = 100;
  bool relative_gap = false;  // measure the gap against 1 + |z_upper|
  double theta_lower = -1e12; // box bound for the cutting-plane master
  // repair recourse-infeasible iterates with cuts instead of failing
  bool feasibility_cuts = false;
  int max_repairs = 50;
  std::optional<Partition> initial_partition;
  // replaces the adapted partition at x_k; the result must pass
  // check_adapted at x_k or the solver refuses it
  std::function<Partition(const TwoStageProblem&, const VectorXd&,
                          const std::vector<Fan>&)>
      partition_hook;
};

struct IterationRecord {
  int k = 0;
  VectorXd x;
  double master_value = 0;  // raw master optimum this iteration
  double z_lower = 0;
  double z_upper = 0;
  std::size_t cells = 0;
  // seconds per phase
  double t_master = 0, t_partition = 0, t_refine = 0, t_upper = 0;
};

struct SolverState {
  Partition partition;
  VectorXd x_last;
  VectorXd incumbent;  // best x behind z_upper
  double z_lower = -std::numeric_limits<double>::infinity();
  double z_upper = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  std::vector<IterationRecord> history;
  CutPool cuts;  // cutting-plane runs only

  double gap() const { return z_upper - z_lower; }
};

SolverState g2apm(const TwoStageProblem& p, const SolveOptions& opt = {});
SolverState lshaped(const TwoStageProblem& p, const SolveOptions& opt = {});

// aggregated master over the trivial partition: a global lower bound and
// its argmin, no optimality claim
SolverState meanvalue(const TwoStageProblem& p);

// ceil((sqrt(n) L M / eps + 1)^n), saturated at int64 max
long long iteration_bound(int n, double L, double M, double eps);

}  // namespace gapm
