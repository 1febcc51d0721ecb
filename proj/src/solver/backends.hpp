#pragma once

#include "ldes/solver.hpp"

namespace ldes::detail {

SolveResult solve_interior_point(const LinearProgram& lp, const SolveOptions& options);
SolveResult solve_simplex(const LinearProgram& lp, const SolveOptions& options);

}  // namespace ldes::detail
