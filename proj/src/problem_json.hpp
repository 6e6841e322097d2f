#pragma once

// Problem files: a JSON document with first_stage, recourse (or
// recourse_scenarios), distribution, and optional options/name. Parse
// errors carry the offending field path.

#include <optional>
#include <string>

#include "problem.hpp"

namespace gapm {

struct FileOptions {
  std::optional<double> eps;
  std::optional<int> max_iter;
  std::optional<std::string> solver;  // g2apm | lshaped | meanvalue | saa-ref
  std::optional<std::uint64_t> seed;
};

struct ProblemFile {
  TwoStageProblem problem;
  FileOptions options;
};

ProblemFile parse_problem_json(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

// full-precision document; parse(problem_to_json(p)) is value-identical
std::string problem_to_json(const TwoStageProblem& p,
                            const FileOptions& opts = {});

}  // namespace gapm
