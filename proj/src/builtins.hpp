#pragma once

// Ready-made problem instances: the two worked examples (prodmix, cvar),
// a small capacity-planning instance, and a seeded random generator.

#include <cstdint>

#include "problem.hpp"

namespace gapm {

TwoStageProblem builtin_prodmix();
TwoStageProblem builtin_cvar();
TwoStageProblem builtin_lands_mini();
TwoStageProblem builtin_random_discrete(std::uint64_t seed, Index n, Index m,
                                        Index l, std::size_t atoms = 8);

// "prodmix", "cvar", "lands-mini", or "random-discrete(seed,n,m,l[,atoms])"
bool is_builtin_name(const std::string& spec);
TwoStageProblem make_builtin(const std::string& spec);

}  // namespace gapm
