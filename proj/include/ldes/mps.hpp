#pragma once

#include "ldes/lp.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace ldes {

// Free-format MPS with an OBJSENSE section. The objective constant is stored
// as the negated RHS of the objective row, the convention external solvers
// such as HiGHS and CPLEX follow.
std::string to_mps(const LinearProgram& lp, std::string_view model_name = "ldes");
void write_mps(const LinearProgram& lp, const std::filesystem::path& path,
               std::string_view model_name = "ldes");

// Reads the subset written by to_mps (no RANGES, no integer markers).
LinearProgram parse_mps(std::string_view text);
LinearProgram read_mps(const std::filesystem::path& path);

}  // namespace ldes
