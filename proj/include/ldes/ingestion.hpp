#pragma once

#include "ldes/system.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace ldes {

// Settings read from the key/value config file that accompanies each input
// directory. Only `state` and `horizon_h` are required.
struct RunConfig {
    std::string state;
    int horizon_h = 0;
    double reserve_fraction = 0.04;
    PenaltyPrices penalty_prices;
    double hour_weight = 1.0;
    // Season start hours; absent means meteorological seasons.
    std::optional<int> winter_start_h, spring_start_h, summer_start_h, fall_start_h;
    CandidateRules rules;
    int cluster_k = 3;
    std::uint64_t seed = 42;

    SeasonCalendar calendar() const;
};

// Parses `key = value` lines; '#' starts a comment. Unknown keys, malformed
// values and missing required keys raise ValidationError naming the key.
RunConfig parse_config(std::string_view text, std::string_view source = "config");
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& config);

// File names inside an input directory.
inline constexpr std::string_view kLoadFile = "load.csv";
inline constexpr std::string_view kGeneratorsFile = "generators.csv";
inline constexpr std::string_view kStoragesFile = "storages.csv";
inline constexpr std::string_view kProfilesFile = "profiles.csv";
inline constexpr std::string_view kConfigFile = "config.txt";

// Reads the four CSV tables, applies the scalar settings of config and
// validates the result. Costs given per kW are converted to per MW; fuel
// price times heat rate is folded into the variable cost.
SystemSpec load_system(const std::filesystem::path& input_dir, const RunConfig& config);

// Writes the four CSV tables (not the config) so that load_system reproduces
// spec.
void write_system(const SystemSpec& spec, const std::filesystem::path& output_dir);

// Run config carrying the scalar settings of spec.
RunConfig config_for(const SystemSpec& spec);

// Replaces, within each balancing area and technology, the non-intermittent
// existing generators by min(k, count) capacity-weighted aggregates chosen by
// 1-D k-means on variable cost.
std::vector<GeneratorAsset> cluster_generators(const std::vector<GeneratorAsset>& gens, int k,
                                               std::uint64_t seed);

// Adds IES candidates mirroring each existing intermittent generator, one
// SDES candidate and one LDES asset for the state. Rejects a spec that is
// already expanded.
SystemSpec build_candidates(const SystemSpec& spec, const CandidateRules& rules);

// load_system + clustering + candidate construction.
SystemSpec prepare_system(const std::filesystem::path& input_dir, const RunConfig& config);

}  // namespace ldes
