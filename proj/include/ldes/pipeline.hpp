#pragma once

#include "ldes/ingestion.hpp"
#include "ldes/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ldes {

struct PipelineOptions {
    std::optional<std::filesystem::path> config;  // single-state runs only
    std::vector<std::string> states;              // empty = all
    std::optional<std::vector<double>> grid_mw;
    int refine_points = -1;  // -1: default, or 0 when a grid is given
    std::optional<double> ldes_duration_h;
    std::optional<double> ldes_rte;
    std::optional<std::uint64_t> seed;
    std::optional<int> cluster_k;
    Backend backend = Backend::interior_point;
    Limits limits;  // per LP solve
    int jobs = 1;
    bool export_lp = false;
    bool quiet = true;
};

struct StateInput {
    std::string name;
    std::filesystem::path dir;
    std::filesystem::path config;
};

struct PipelineOutcome {
    std::vector<std::string> states;
    std::vector<std::string> failures;  // "<state> <stage>: <message>"
    std::vector<std::filesystem::path> outputs;
    bool ok() const { return failures.empty(); }
};

// A directory with load.csv is one state; otherwise every sub-directory
// holding a config.txt is one state, in name order.
bool is_multi_state(const std::filesystem::path& input_dir);
std::vector<StateInput> discover_states(const std::filesystem::path& input_dir,
                                        const PipelineOptions& options);

// Loads, clusters, expands and applies the LDES overrides.
SystemSpec prepare_state(const StateInput& in, const PipelineOptions& options);

// Ingestion and validation only.
std::vector<std::string> validate_inputs(const std::filesystem::path& input_dir,
                                         const PipelineOptions& options);

// Input problems throw (ValidationError, IoError, ...); solver failures are
// collected in the outcome and in manifest.json.
PipelineOutcome run_pipeline(const std::filesystem::path& input_dir,
                             const std::filesystem::path& out_dir, const PipelineOptions& options);

// "1,2,4" or "log:<lo>:<hi>:<n>".
std::vector<double> parse_grid(const std::string& text);

std::string_view version();

}  // namespace ldes
