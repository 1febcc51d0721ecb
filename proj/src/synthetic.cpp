#include "ldes/synthetic.hpp"

#include "ldes/error.hpp"
#include "ldes/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ldes {

namespace {

GeneratorAsset firm(std::string id, std::string ba, Technology t, double cap, double vc, double fom_kw,
                    double ramp) {
    GeneratorAsset g;
    g.id = std::move(id);
    g.balancing_area = std::move(ba);
    g.technology = t;
    g.capacity_mw = cap;
    g.variable_cost = vc;
    g.fom_cost = fom_kw * 1000.0;
    g.ramp_rate = ramp;
    return g;
}

}  // namespace

SystemSpec synthetic_state(const SyntheticOptions& o) {
    if (o.horizon_h < 2) throw ArgumentError("synthetic horizon must be at least 2 hours");
    SystemSpec s;
    s.state = o.state;
    s.horizon_h = o.horizon_h;
    s.reserve_fraction = o.reserve_fraction;
    s.hour_weight = 8760.0 / o.horizon_h;
    s.season_calendar = SeasonCalendar::meteorological(o.horizon_h);

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pi = std::numbers::pi;

    s.load.resize(o.horizon_h);
    for (int t = 0; t < o.horizon_h; ++t) {
        const double daily = 0.8 + 0.2 * std::sin(2.0 * pi * (t % 24 - 9) / 24.0);
        const double season = s.season_calendar.season_of(t) == Season::winter ? 1.0 : 0.9;
        s.load[t] = o.peak_load_mw * daily * season * (0.97 + 0.03 * unit(rng));
    }

    const double th = o.thermal_mw;
    s.generators = {
        firm("gas_cc", "p1", Technology::gas, 0.45 * th, 32.0, 14.0, 0.6),
        firm("gas_ct", "p2", Technology::gas, 0.25 * th, 68.0, 11.0, 1.0),
        firm("coal_1", "p1", Technology::coal, 0.30 * th, 27.0, 42.0, 0.25),
        firm("nuclear_1", "p2", Technology::nuclear, 0.15 * o.peak_load_mw, 9.0, 120.0, 0.05),
        firm("hydro_1", "p2", Technology::hydro, 0.05 * o.peak_load_mw, 3.0, 30.0, 1.0),
    };
    struct Ies {
        const char* id;
        const char* ba;
        Technology tech;
        double share;
    };
    const Ies plants[] = {{"solar_1", "p1", Technology::solar, 0.6},
                          {"solar_2", "p2", Technology::solar, 0.4},
                          {"wind_1", "p1", Technology::wind_ons, 0.5},
                          {"wind_2", "p2", Technology::wind_ons, 0.5}};
    for (const Ies& p : plants) {
        const bool solar = p.tech == Technology::solar;
        GeneratorAsset g = firm(p.id, p.ba, p.tech, p.share * (solar ? o.solar_mw : o.wind_mw), 0.0,
                                solar ? 18.0 : 28.0, 1.0);
        TimeSeries cf(o.horizon_h);
        const double phase = 2.0 * pi * unit(rng);
        for (int t = 0; t < o.horizon_h; ++t) {
            const bool spring = s.season_calendar.season_of(t) == Season::spring;
            double v = 0.0;
            if (solar) {
                v = std::max(0.0, std::sin(pi * (t % 24 - 6) / 12.0)) * (0.75 + 0.25 * unit(rng));
            } else {
                v = 0.35 + 0.25 * std::sin(2.0 * pi * t / 84.0 + phase) + 0.1 * (unit(rng) - 0.5);
            }
            if (spring) v += o.spring_boost;
            cf[t] = std::clamp(v, 0.0, 1.0);
        }
        s.cf_profiles[g.id] = std::move(cf);
        s.generators.push_back(std::move(g));
    }
    for (auto& g : s.generators) g.state = o.state;

    StorageAsset bat;
    bat.id = "battery_1";
    bat.state = o.state;
    bat.kind = StorageKind::sdes_existing;
    bat.duration_h = 4.0;
    bat.power_mw = 0.05 * o.peak_load_mw;
    bat.rte = 0.85;
    bat.fom_cost = 10000.0;
    StorageAsset phs;
    phs.id = "phs_1";
    phs.state = o.state;
    phs.kind = StorageKind::phs;
    phs.duration_h = 10.0;
    phs.power_mw = 0.05 * o.peak_load_mw;
    phs.rte = 0.78;
    phs.fom_cost = 15000.0;
    s.storages = {bat, phs};
    validate(s);
    return s;
}

RunConfig synthetic_config(const SystemSpec& spec) {
    RunConfig c = config_for(spec);
    c.rules.ies_invest_cost = {{Technology::solar, 70000.0},
                               {Technology::wind_ons, 110000.0},
                               {Technology::wind_ofs, 190000.0}};
    c.rules.sdes_invest_cost = 60000.0;
    c.rules.sdes_fom_cost = 10000.0;
    return c;
}

void write_state_dir(const SystemSpec& spec, const RunConfig& config, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_system(spec, dir);
    write_text(dir / kConfigFile, format_config(config));
}

}  // namespace ldes
