#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace ldes::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return fs::path(LDES_TEST_DATA_DIR); }

fs::path toy_dir() { return data_dir() / "toy"; }

SystemSpec toy_spec() {
    SystemSpec s;
    s.state = "TOY";
    s.horizon_h = 2;
    s.load = {1.0, 1.0};
    s.reserve_fraction = 0.0;
    s.season_calendar = SeasonCalendar::meteorological(2);

    GeneratorAsset gas;
    gas.id = "gas1";
    gas.balancing_area = "p1";
    gas.state = "TOY";
    gas.technology = Technology::gas;
    gas.capacity_mw = 1.0;
    gas.variable_cost = 50.0;
    gas.fom_cost = 10.0;
    GeneratorAsset solar;
    solar.id = "solar_cand";
    solar.balancing_area = "p1";
    solar.state = "TOY";
    solar.technology = Technology::solar;
    solar.kind = AssetKind::candidate;
    solar.max_invest_mw = 1000.0;
    solar.invest_cost = 30.0;
    s.generators = {gas, solar};
    s.cf_profiles["solar_cand"] = {1.0, 0.0};

    StorageAsset ldes;
    ldes.id = "TOY_ldes";
    ldes.state = "TOY";
    ldes.kind = StorageKind::ldes;
    ldes.duration_h = 100.0;
    ldes.rte = 1.0;
    s.storages = {ldes};
    return s;
}

SystemSpec spring_winter_toy() {
    SystemSpec s = toy_spec();
    s.state = "SWT";
    s.horizon_h = 24;
    s.load.assign(24, 1.0);
    s.season_calendar = SeasonCalendar(24, 18, 0, 12, 15);
    TimeSeries cf(24, 0.0);
    for (int h = 0; h < 12; ++h) cf[h] = 1.0;
    s.cf_profiles["solar_cand"] = cf;
    for (auto& g : s.generators) g.state = "SWT";
    s.storages[0].id = "SWT_ldes";
    s.storages[0].state = "SWT";
    s.storages[0].rte = 0.425;
    validate(s);
    return s;
}

SystemSpec random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto between = [&](double a, double b) { return a + (b - a) * u(rng); };

    SystemSpec s;
    s.state = "R" + std::to_string(seed);
    s.horizon_h = 2 + static_cast<int>(rng() % 23);
    const int T = s.horizon_h;
    s.reserve_fraction = between(0.0, 0.1);
    s.hour_weight = between(1.0, 10.0);
    s.season_calendar = SeasonCalendar::meteorological(T);
    for (int t = 0; t < T; ++t) s.load.push_back(between(50.0, 150.0));

    auto profile = [&](Technology tech) {
        std::vector<double> cf(T);
        for (int t = 0; t < T; ++t) {
            cf[t] = tech == Technology::solar ? std::max(0.0, std::sin(M_PI * (t % 24 - 6) / 12.0)) * u(rng)
                                              : u(rng);
        }
        return cf;
    };

    GeneratorAsset gas;
    gas.id = "gas";
    gas.balancing_area = "p1";
    gas.state = s.state;
    gas.technology = Technology::gas;
    gas.capacity_mw = between(80.0, 170.0);
    gas.variable_cost = between(20.0, 60.0);
    gas.fom_cost = between(5.0, 20.0) * 1000.0;
    gas.ramp_rate = u(rng) < 0.5 ? 1.0 : between(0.2, 0.9);
    s.generators.push_back(gas);

    const int n_gen = 1 + static_cast<int>(rng() % 3);
    const Technology second[] = {Technology::coal, Technology::nuclear, Technology::solar, Technology::wind_ons};
    if (n_gen >= 2) {
        GeneratorAsset g;
        g.id = "g2";
        g.balancing_area = "p1";
        g.state = s.state;
        g.technology = second[rng() % 4];
        g.capacity_mw = between(20.0, 80.0);
        g.variable_cost = g.firm() ? between(5.0, 40.0) : 0.0;
        g.fom_cost = between(10.0, 60.0) * 1000.0;
        g.ramp_rate = g.firm() ? between(0.1, 1.0) : 1.0;
        if (g.intermittent()) s.cf_profiles[g.id] = profile(g.technology);
        s.generators.push_back(g);
    }
    if (n_gen >= 3) {
        GeneratorAsset g;
        g.id = "ies_cand";
        g.balancing_area = "p1";
        g.state = s.state;
        g.technology = u(rng) < 0.5 ? Technology::solar : Technology::wind_ons;
        g.kind = AssetKind::candidate;
        g.max_invest_mw = between(50.0, 400.0);
        g.invest_cost = between(20.0, 120.0) * 1000.0;
        g.fom_cost = between(0.0, 20.0) * 1000.0;
        s.cf_profiles[g.id] = profile(g.technology);
        s.generators.push_back(g);
    }

    if (rng() % 2 == 0) {
        StorageAsset st;
        st.id = "short";
        st.state = s.state;
        const int pick = static_cast<int>(rng() % 3);
        st.kind = pick == 0 ? StorageKind::sdes_existing : pick == 1 ? StorageKind::phs : StorageKind::sdes_candidate;
        st.duration_h = std::round(between(2.0, 8.0));
        st.rte = between(0.6, 0.95);
        if (st.kind == StorageKind::sdes_candidate) {
            st.max_invest_mw = between(10.0, 60.0);
            st.invest_cost = between(20.0, 80.0) * 1000.0;
        } else {
            st.power_mw = between(5.0, 40.0);
        }
        st.fom_cost = between(0.0, 15.0) * 1000.0;
        s.storages.push_back(st);
    }
    StorageAsset ldes;
    ldes.id = s.state + "_ldes";
    ldes.state = s.state;
    ldes.kind = StorageKind::ldes;
    ldes.duration_h = std::round(between(4.0, 100.0));
    ldes.rte = between(0.4, 1.0);
    s.storages.push_back(ldes);
    validate(s);
    return s;
}

fs::path scratch_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("ldes_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Partition brute_force_partition(const std::vector<double>& values, int k) {
    const int n = static_cast<int>(values.size());
    Partition best;
    best.inertia = std::numeric_limits<double>::infinity();
    std::vector<int> label(n, 0);
    while (true) {
        double inertia = 0.0;
        std::vector<std::vector<double>> groups(k);
        for (int i = 0; i < n; ++i) groups[label[i]].push_back(values[i]);
        for (const auto& g : groups) {
            if (g.empty()) continue;
            double mean = 0.0;
            for (double v : g) mean += v;
            mean /= static_cast<double>(g.size());
            for (double v : g) inertia += (v - mean) * (v - mean);
        }
        if (inertia < best.inertia - 1e-12) {
            best.inertia = inertia;
            best.groups.clear();
            for (auto g : groups) {
                if (g.empty()) continue;
                std::sort(g.begin(), g.end());
                best.groups.push_back(g);
            }
            std::sort(best.groups.begin(), best.groups.end());
        }
        int i = 0;
        while (i < n && ++label[i] == k) label[i++] = 0;
        if (i == n) break;
    }
    return best;
}

}  // namespace ldes::testing
