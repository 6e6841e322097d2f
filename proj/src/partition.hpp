#pragma once

// Partitions of the support of xi into polyhedral cells with exact
// conditional statistics, and the adapted partition R_x built from the
// normal fans of the dual polyhedra.

#include <optional>
#include <string>

#include "problem.hpp"

namespace gapm {

// cells below this probability are dropped during construction
inline constexpr double kProbFloor = 1e-12;

struct Cell {
  HRep geom;                 // over the random coordinates
  std::vector<bool> strict;  // open inequality rows of geom
  std::vector<std::string> origin;  // lineage tags, accumulated on refinement
  std::optional<std::vector<std::size_t>> atom_list;  // discrete support
  CellStats stats;
};

struct Partition {
  std::vector<Cell> cells;

  double total_prob() const;
  std::vector<CellStats> stats() const;
  std::size_t size() const { return cells.size(); }
};

Partition trivial_partition(const XiDistribution& dist);

// one normal fan per recourse scenario
std::vector<Fan> dual_fans(const TwoStageProblem& p, double tol = kGeomTol);

// R_x: cells are the positive-probability preimages of the relative
// interiors of the fans' cones at psi = h - T x, refined across scenarios.
// Discrete atoms are placed by classify_point, never by raw sign tests.
// Throws ErrorCode::infeasible when part of the support falls outside a
// coverage region (the recourse is infeasible there).
Partition adapted_partition(const TwoStageProblem& p, const VectorXd& x,
                            const std::vector<Fan>& fans,
                            const std::string& label = "x",
                            double tol = kGeomTol);

// cellwise intersection; zero-probability intersections are dropped and a
// mass-conservation cross-check guards the result
Partition common_refinement(const Partition& a, const Partition& b,
                            const XiDistribution& dist, double tol = kGeomTol);

// does every cell of `fine` sit inside one cell of `coarse` (up to null
// sets, mass agreement within 1e-9)?
bool is_refinement(const Partition& fine, const Partition& coarse,
                   const XiDistribution& dist, double tol = kGeomTol);

// every cell must fit inside the closure of one maximal cone's preimage,
// for every scenario fan: the condition making the aggregated bound exact at x
bool check_adapted(const TwoStageProblem& p, const VectorXd& x,
                   const Partition& part, const std::vector<Fan>& fans,
                   double tol = kGeomTol);

// user-supplied grouping of atoms into cells (discrete laws only)
Partition partition_from_atom_groups(
    const XiDistribution& dist,
    const std::vector<std::vector<std::size_t>>& groups);

}  // namespace gapm
