#include "ldes/analytics.hpp"

#include "ldes/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace ldes {

namespace {

bool is_solar(Technology t) { return t == Technology::solar; }

void accumulate(ObjectiveBreakdown& into, const ObjectiveBreakdown& b) {
    for (int k = 0; k < kNumCostTerms; ++k) {
        into.term(static_cast<CostTerm>(k)) += b.term(static_cast<CostTerm>(k));
    }
    into.ldes_term += b.ldes_term;
    into.q_over += b.q_over;
    into.total += b.total;
}

void add_capacities(std::map<std::string, double>& into, const DispatchSolution& d) {
    for (const auto& g : d.generators) into[std::string(to_string(g.technology))] += g.capacity_mw;
    for (const auto& s : d.storages) {
        const char* key = s.kind == StorageKind::ldes  ? "storage_ldes"
                          : s.kind == StorageKind::phs ? "storage_phs"
                                                       : "storage_sdes";
        into[key] += s.power_mw;
    }
}

}  // namespace

TimeSeries soc_boundaries(const TimeSeries& e) {
    if (e.empty()) return {};
    TimeSeries out;
    out.reserve(e.size() + 1);
    out.push_back(e.back());
    out.insert(out.end(), e.begin(), e.end());
    return out;
}

std::map<Season, double> seasonal_soc_diff(const TimeSeries& soc, double energy_cap,
                                           const SeasonCalendar& calendar) {
    const int H = calendar.horizon();
    const int n = static_cast<int>(soc.size());
    if (n != H && n != H + 1) {
        throw ArgumentError(fmt::format("soc has {} values, expected {} or {}", n, H, H + 1));
    }
    std::map<Season, double> out;
    if (!(energy_cap > 0.0)) return out;
    auto at = [&](int h) { return soc[std::min(h, n - 1)]; };
    for (Season s : kAllSeasons) {
        double diff = 0.0;
        for (const HourRange& r : calendar.ranges(s)) diff += at(r.end) - at(r.begin);
        out[s] = diff / energy_cap;
    }
    return out;
}

std::map<Season, SeasonalAvailability> seasonal_ies_availability(const SystemSpec& spec) {
    std::vector<const GeneratorAsset*> ies;
    double cap = 0.0;
    for (const auto& g : spec.generators) {
        if (g.kind == AssetKind::existing && g.intermittent()) {
            ies.push_back(&g);
            cap += g.capacity_mw;
        }
    }
    std::map<Season, SeasonalAvailability> out;
    if (ies.empty()) return out;
    for (Season s : kAllSeasons) {
        const int hours = spec.season_calendar.hours_in(s);
        if (hours == 0) continue;
        double avail = 0.0;
        double load = 0.0;
        for (const HourRange& r : spec.season_calendar.ranges(s)) {
            for (int t = r.begin; t < r.end; ++t) {
                load += spec.load[t];
                for (const GeneratorAsset* g : ies) avail += g->capacity_mw * spec.profile(*g)[t];
            }
        }
        SeasonalAvailability a;
        a.avg_cf = cap > 0.0 ? avail / (cap * hours) : 0.0;
        a.rel_availability = load > 0.0 ? avail / load : 0.0;
        out[s] = a;
    }
    return out;
}

StateMetrics compute_state_metrics(const SystemSpec& spec, const BaselineResult& baseline,
                                   const ViabilityCurve& curve) {
    StateMetrics m;
    m.state = spec.state;
    const DispatchSolution& d = baseline.dispatch;
    if (d.horizon_h != spec.horizon_h) {
        throw ArgumentError("baseline dispatch does not match the system horizon");
    }
    double thermal_mwh = 0.0;
    double solar_mwh = 0.0;
    double wind_mwh = 0.0;
    for (const auto& g : d.generators) {
        const double e = std::accumulate(g.output.begin(), g.output.end(), 0.0);
        if (is_thermal(g.technology)) thermal_mwh += e;
        else if (is_solar(g.technology)) solar_mwh += e;
        else if (is_intermittent(g.technology)) wind_mwh += e;
    }
    const double load = spec.total_load_mwh();
    const double thermal_cap = spec.thermal_capacity_mw();
    if (load > 0.0) m.thermal_participation = thermal_mwh / load;
    if (thermal_cap > 0.0) m.thermal_utilization = thermal_mwh / (thermal_cap * spec.horizon_h);

    double ies_cap = 0.0;
    double weighted_cf = 0.0;
    double thermal_fom = 0.0;
    for (const auto& g : spec.generators) {
        if (g.kind != AssetKind::existing) continue;
        if (g.intermittent()) {
            const TimeSeries& cf = spec.profile(g);
            ies_cap += g.capacity_mw;
            weighted_cf += g.capacity_mw * std::accumulate(cf.begin(), cf.end(), 0.0) / cf.size();
        }
        if (is_thermal(g.technology)) thermal_fom += g.fom_cost * g.capacity_mw;
    }
    if (ies_cap > 0.0) m.avg_ies_cf = weighted_cf / ies_cap;
    if (baseline.q_star > 0.0) m.thermal_fom_share = thermal_fom / baseline.q_star;
    if (solar_mwh + wind_mwh > 0.0) {
        m.solar_share = solar_mwh / (solar_mwh + wind_mwh);
        m.wind_share = wind_mwh / (solar_mwh + wind_mwh);
    }

    if (!curve.points.empty()) {
        const ViabilityPoint& best = best_point(curve);
        m.c_vc_max_per_kw = best.c_vc_per_kw;
        m.x_at_max_mw = best.x_power_mw;
        m.alpha = alpha_ratio(best.x_power_mw, baseline.thermal_capacity_mw);
        m.min_viable_mw = min_viable_capacity(curve).x_mw;
        for (const auto& s : best.dispatch.storages) {
            if (s.kind != StorageKind::ldes) continue;
            m.seasonal_soc_diff = seasonal_soc_diff(soc_boundaries(s.soc), s.energy_mwh, spec.season_calendar);
        }
    }
    m.seasonal_ies_availability = seasonal_ies_availability(spec);
    return m;
}

std::vector<std::string> classify_threshold(const std::map<std::string, double>& results,
                                            double threshold) {
    if (std::isnan(threshold)) throw ArgumentError("threshold is NaN");
    std::vector<std::pair<std::string, double>> hits;
    for (const auto& [state, v] : results) {
        if (v >= threshold) hits.emplace_back(state, v);
    }
    std::stable_sort(hits.begin(), hits.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (auto& h : hits) out.push_back(h.first);
    return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, double width, double origin) {
    if (!(width > 0.0) || !std::isfinite(width)) throw ArgumentError("bin width must be > 0");
    std::map<long long, int> bins;
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        ++bins[static_cast<long long>(std::floor((v - origin) / width))];
    }
    std::vector<HistogramBin> out;
    for (auto [k, n] : bins) out.push_back({origin + static_cast<double>(k) * width, n});
    return out;
}

NationalRollup national_rollup(const std::vector<StateRollupInput>& states) {
    NationalRollup r;
    bool first = true;
    for (const auto& s : states) {
        if (!s.spec || !s.baseline || !s.chosen) throw ArgumentError("incomplete state record");
        if (first) {
            r.horizon_h = s.spec->horizon_h;
            first = false;
        } else if (s.spec->horizon_h != r.horizon_h) {
            throw ValidationError(fmt::format("state {} has horizon {}, expected {}", s.spec->state,
                                              s.spec->horizon_h, r.horizon_h));
        }
        if (s.chosen->c_vc_per_kw < 0.0) {
            r.excluded_states.push_back(s.spec->state);
            continue;
        }
        r.states.push_back(s.spec->state);
        r.q_star += s.baseline->q_star;
        r.avoided_cost += s.chosen->avoided_cost;
        r.ldes_power_mw += s.chosen->x_power_mw;
        add_capacities(r.baseline_capacity_mw, s.baseline->dispatch);
        add_capacities(r.opportunity_capacity_mw, s.chosen->dispatch);
        accumulate(r.baseline_cost, s.baseline->breakdown);
        accumulate(r.opportunity_cost, s.chosen->breakdown);
        if (s.without_ldes) {
            accumulate(r.without_ldes_cost.terms, s.without_ldes->breakdown);
            r.without_ldes_cost.present = true;
        }
    }
    for (const auto& [k, v] : r.baseline_capacity_mw) r.replacement_delta_mw[k] -= v;
    for (const auto& [k, v] : r.opportunity_capacity_mw) r.replacement_delta_mw[k] += v;
    return r;
}

}  // namespace ldes
