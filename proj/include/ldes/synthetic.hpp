#pragma once

#include "ldes/ingestion.hpp"
#include "ldes/system.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace ldes {

// Parameters of a generated single-state system: 5 firm units, 2 solar and 2
// wind plants, one battery and one pumped-hydro plant.
struct SyntheticOptions {
    std::string state = "SYN";
    int horizon_h = 168;
    std::uint64_t seed = 1;
    double peak_load_mw = 1000.0;
    double thermal_mw = 700.0;  // gas + coal
    double solar_mw = 400.0;
    double wind_mw = 400.0;
    // Added to the solar and wind capacity factors during spring.
    double spring_boost = 0.0;
    double reserve_fraction = 0.04;
};

// Existing fleet only (not expanded). hour_weight scales the horizon to a
// year.
SystemSpec synthetic_state(const SyntheticOptions& options);

// Config matching synthetic_state, with candidate costs filled in.
RunConfig synthetic_config(const SystemSpec& spec);

// Writes the CSV tables and config.txt.
void write_state_dir(const SystemSpec& spec, const RunConfig& config,
                     const std::filesystem::path& dir);

}  // namespace ldes
