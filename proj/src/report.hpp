#pragma once

// Run orchestration and rendering: the iteration table for people, a
// newline-delimited record stream for machines, partition dumps, and the
// sample-average-approximation baseline.

#include <cstdint>
#include <string>

#include "solver.hpp"

namespace gapm {

struct RunOptions {
  std::string mode = "g2apm";  // g2apm | lshaped | meanvalue | saa-ref
  SolveOptions solve;
  std::uint64_t seed = 0;  // drives saa-ref sampling only
  int saa_samples = 10000;
  int saa_replications = 20;
};

struct SaaReplication {
  int r = 0;
  double value = 0;
  int iterations = 0;
  bool converged = false;
};

struct RunReport {
  std::string mode;
  std::string problem_name;
  int exit_status = 0;  // 0 done, 2 iteration cap
  std::uint64_t seed = 0;
  double elapsed_seconds = 0;
  SolverState state;  // g2apm / lshaped / meanvalue
  // saa-ref only
  std::vector<SaaReplication> replications;
  int saa_samples = 0;
  double saa_mean = 0;
  double saa_half_width = 0;  // normal 95% interval
};

RunReport run_problem(const TwoStageProblem& p, const RunOptions& opt);

// the empirical measure: `samples` equally weighted draws, deterministic
// in the seed across platforms
TwoStageProblem sample_empirical(const TwoStageProblem& p, int samples,
                                 std::uint64_t seed);

// one record per iteration (or replication) plus a summary record; reruns
// with identical inputs are byte-identical, so no wall-clock inside
std::string render_ndjson(const RunReport& rep);

// bounds to 2 decimals, status and per-phase timings at the foot
std::string render_table(const RunReport& rep);

// per cell: lineage, probability, conditional means
std::string render_partition_text(const Partition& part);
std::string render_partition_ndjson(const Partition& part);

// shortest decimal form that parses back to the same double;
// non-finite values become null
std::string json_number(double v);

}  // namespace gapm
