#pragma once

#include "ldes/formulation.hpp"
#include "ldes/ingestion.hpp"
#include "ldes/system.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ldes::testing {

std::filesystem::path data_dir();
std::filesystem::path toy_dir();

// Two-hour toy: load 1 MW, gas 1 MW at 50 $/MWh with 10 $/MW-yr FO&M, a
// solar candidate (cf 1 then 0, 30 $/MW-yr) and a lossless 100-h LDES.
SystemSpec toy_spec();

// 24 hours: spring is hours 0-11 and carries all the solar output, the
// other seasons have none. Load is 1 MW throughout.
SystemSpec spring_winter_toy();

// Expanded instance with T <= 24, at most 3 generators and at most 2
// storages, one of them the LDES.
SystemSpec random_instance(std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

// Exhaustive search over every assignment of values to at most k labels;
// returns the minimal within-group sum of squares and the groups as sorted
// value lists, sorted by first element.
struct Partition {
    double inertia = 0.0;
    std::vector<std::vector<double>> groups;
};
Partition brute_force_partition(const std::vector<double>& values, int k);

}  // namespace ldes::testing
