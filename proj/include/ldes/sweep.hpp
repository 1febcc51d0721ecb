#pragma once

#include "ldes/formulation.hpp"
#include "ldes/solver.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ldes {

struct RunOptions {
    SolveOptions solve;
    int jobs = 1;
    OpportunityForm form = OpportunityForm::replacement;
};

struct SolveStats {
    Backend backend = Backend::interior_point;
    int iterations = 0;
    double seconds = 0.0;
    double max_residual = 0.0;
};

struct BaselineResult {
    double q_star = 0.0;
    DispatchSolution dispatch;
    ObjectiveBreakdown breakdown;
    double thermal_capacity_mw = 0.0;
    SolveStats stats;
};

struct ViabilityPoint {
    double x_power_mw = 0.0;
    double c_vc_per_kw = 0.0;   // internal $/MW divided by 1000
    double avoided_cost = 0.0;  // q_star - opportunity cost
    double q_over = 0.0;
    double opportunity_cost = 0.0;
    ObjectiveBreakdown breakdown;
    DispatchSolution dispatch;
    SolveStats stats;

    double c_vc_per_mw() const { return c_vc_per_kw * 1000.0; }
};

struct PointFailure {
    double x_power_mw = 0.0;
    std::string message;
};

struct ViabilityCurve {
    std::string state;
    double q_star = 0.0;
    std::vector<ViabilityPoint> points;  // increasing x_power_mw
    std::vector<PointFailure> failures;
    std::vector<std::string> diagnostics;
};

// Throws SolveError when the LP is not solved to optimality.
BaselineResult run_baseline(const SystemSpec& spec, const RunOptions& options = {});

ViabilityPoint viability_at(const SystemSpec& spec, double x_power_mw, double q_star,
                            const RunOptions& options = {});

// Retired system with the LDES left out; x_power_mw of the result is 0 and
// its c_vc is 0.
ViabilityPoint run_without_ldes(const SystemSpec& spec, double q_star,
                                const RunOptions& options = {});

// Points that fail to solve are listed in failures instead of points.
ViabilityCurve sweep_curve(const SystemSpec& spec, const std::vector<double>& grid_mw,
                           double q_star, const RunOptions& options = {});

// Sweeps grid_mw, then refine_points more capacities around the best point,
// merged into one curve.
ViabilityCurve sweep_refined(const SystemSpec& spec, const std::vector<double>& grid_mw,
                             int refine_points, double q_star, const RunOptions& options = {});

std::vector<double> log_grid(double lo_mw, double hi_mw, int n);
std::vector<double> refinement_grid(const ViabilityCurve& curve, int n);

inline constexpr double kDefaultGridLoMw = 100.0;
inline constexpr double kDefaultGridHiMw = 150000.0;
inline constexpr int kDefaultGridPoints = 40;
inline constexpr int kDefaultRefinePoints = 8;

struct MaxViability {
    double c_vc_max_per_kw = 0.0;
    double x_at_max_mw = 0.0;
    bool viable = false;  // c_vc_max >= 0
};

// Ties go to the smallest capacity. Throws ArgumentError on an empty curve.
MaxViability max_viability(const ViabilityCurve& curve);
const ViabilityPoint& best_point(const ViabilityCurve& curve);

struct MinViable {
    std::optional<double> x_mw;
    // Last negative and first non-negative grid capacity, when both exist.
    std::optional<std::pair<double, double>> bracket;
};

MinViable min_viable_capacity(const ViabilityCurve& curve);

std::optional<double> alpha_ratio(double x_at_max_mw, double thermal_capacity_mw);

}  // namespace ldes
