#pragma once

#include "ldes/sweep.hpp"
#include "ldes/system.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ldes {

struct SeasonalAvailability {
    double avg_cf = 0.0;
    double rel_availability = 0.0;
};

struct StateMetrics {
    std::string state;
    std::optional<double> thermal_participation;
    std::optional<double> thermal_utilization;
    std::optional<double> avg_ies_cf;
    std::optional<double> thermal_fom_share;
    std::optional<double> solar_share;
    std::optional<double> wind_share;
    std::optional<double> alpha;
    double c_vc_max_per_kw = 0.0;
    double x_at_max_mw = 0.0;
    std::optional<double> min_viable_mw;
    // LDES state of charge at the best capacity.
    std::map<Season, double> seasonal_soc_diff;
    std::map<Season, SeasonalAvailability> seasonal_ies_availability;
};

StateMetrics compute_state_metrics(const SystemSpec& spec, const BaselineResult& baseline,
                                   const ViabilityCurve& curve);

// soc holds either one value per hour, read as the level at the start of
// that hour, or horizon + 1 values where the last one closes the horizon.
// Empty when energy_cap_mwh <= 0.
std::map<Season, double> seasonal_soc_diff(const TimeSeries& soc, double energy_cap_mwh,
                                           const SeasonCalendar& calendar);

// Start-of-hour levels plus the closing level, from end-of-hour levels of a
// cyclic dispatch.
TimeSeries soc_boundaries(const TimeSeries& end_of_hour_soc);

// Existing intermittent assets only; empty when there are none.
std::map<Season, SeasonalAvailability> seasonal_ies_availability(const SystemSpec& spec);

// States with value >= threshold, highest first (ties by name).
std::vector<std::string> classify_threshold(const std::map<std::string, double>& results,
                                            double threshold);

struct HistogramBin {
    double bin_start = 0.0;
    int count = 0;
};

// Half-open bins [start, start + width) over the positive values; empty bins
// are omitted.
std::vector<HistogramBin> histogram(const std::vector<double>& values, double bin_width,
                                    double origin = 0.0);

struct StateRollupInput {
    const SystemSpec* spec = nullptr;
    const BaselineResult* baseline = nullptr;
    const ViabilityPoint* chosen = nullptr;
    const ViabilityPoint* without_ldes = nullptr;  // optional
};

struct CostTotals {
    ObjectiveBreakdown terms;
    bool present = false;
};

struct NationalRollup {
    std::vector<std::string> states;
    std::vector<std::string> excluded_states;
    int horizon_h = 0;
    double q_star = 0.0;
    double avoided_cost = 0.0;
    double ldes_power_mw = 0.0;
    std::map<std::string, double> baseline_capacity_mw;     // by technology or storage kind
    std::map<std::string, double> opportunity_capacity_mw;
    std::map<std::string, double> replacement_delta_mw;     // opportunity - baseline
    ObjectiveBreakdown baseline_cost;
    ObjectiveBreakdown opportunity_cost;
    CostTotals without_ldes_cost;
};

// States whose chosen point has a negative viability cost are excluded.
// Throws ValidationError when horizons differ.
NationalRollup national_rollup(const std::vector<StateRollupInput>& states);

}  // namespace ldes
