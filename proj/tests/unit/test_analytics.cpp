#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/analytics.hpp"
#include "ldes/error.hpp"
#include "ldes/sweep.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace ldes;
using namespace ldes::testing;

namespace {

SystemSpec flat_spec(int horizon) {
    SystemSpec s;
    s.state = "FL";
    s.horizon_h = horizon;
    s.load.assign(horizon, 100.0);
    s.season_calendar = SeasonCalendar::meteorological(horizon);
    return s;
}

GeneratorAsset ies(std::string id, double cap) {
    GeneratorAsset g;
    g.id = std::move(id);
    g.balancing_area = "p1";
    g.state = "FL";
    g.technology = Technology::solar;
    g.capacity_mw = cap;
    return g;
}

}  // namespace

TEST_SUITE("analytics") {
    TEST_CASE("classify_threshold on the quoted pair") {
        const std::map<std::string, double> r = {{"ND", 3881.37}, {"MD", 3.94}};
        CHECK(classify_threshold(r, 1100.0) == std::vector<std::string>{"ND"});
        CHECK(classify_threshold(r, 0.0) == std::vector<std::string>{"ND", "MD"});
        CHECK(classify_threshold(r, -INFINITY) == std::vector<std::string>{"ND", "MD"});
        CHECK(classify_threshold({}, 5.0).empty());
        CHECK(classify_threshold({{"B", 2.0}, {"A", 2.0}}, 0.0) == std::vector<std::string>{"A", "B"});
        CHECK_THROWS_AS(classify_threshold(r, NAN), ArgumentError);
    }

    TEST_CASE("histogram bins") {
        auto h = histogram({1.0, 2.0, 2.5}, 1.0);
        REQUIRE(h.size() == 2);
        CHECK(h[0].bin_start == 1.0);
        CHECK(h[0].count == 1);
        CHECK(h[1].bin_start == 2.0);
        CHECK(h[1].count == 2);
        CHECK(histogram({}, 1.0).empty());
        CHECK(histogram({-1.0, 0.0}, 1.0).empty());

        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(0.001, 6000.0);
        std::vector<double> v(500);
        for (double& x : v) x = u(rng);
        auto big = histogram(v, 250.0);
        int total = 0;
        for (const auto& b : big) total += b.count;
        CHECK(total == 500);
    }

    TEST_CASE("seasonal SoC differences") {
        const int H = 8760 / 73;  // 120 hours
        SeasonCalendar cal = SeasonCalendar::meteorological(H);
        const double cap = 200.0;

        TimeSeries flat(H, 50.0);
        for (auto [s, v] : seasonal_soc_diff(flat, cap, cal)) CHECK(v == 0.0);

        // Rises by 30% of capacity across spring, flat elsewhere, with the
        // closing value given explicitly.
        TimeSeries soc(H + 1, 20.0);
        HourRange spring = cal.ranges(Season::spring).front();
        for (int h = spring.begin; h <= H; ++h) {
            const int k = std::min(h, spring.end) - spring.begin;
            soc[h] = 20.0 + 0.3 * cap * k / spring.size();
        }
        auto d = seasonal_soc_diff(soc, cap, cal);
        CHECK(d[Season::spring] == doctest::Approx(0.30));
        CHECK(d[Season::summer] == doctest::Approx(0.0));
        CHECK(d[Season::fall] == doctest::Approx(0.0));

        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(0.0, cap);
        TimeSeries cyc(H);
        for (double& x : cyc) x = u(rng);
        auto c = seasonal_soc_diff(soc_boundaries(cyc), cap, cal);
        double sum = 0.0;
        for (auto [s, v] : c) sum += v;
        CHECK(std::abs(sum) <= 1e-9);

        CHECK(seasonal_soc_diff(flat, 0.0, cal).empty());
        CHECK_THROWS_AS(seasonal_soc_diff(TimeSeries(H - 1, 0.0), cap, cal), ArgumentError);
    }

    TEST_CASE("soc boundaries prepend the closing level") {
        CHECK(soc_boundaries({1.0, 2.0, 3.0}) == TimeSeries{3.0, 1.0, 2.0, 3.0});
    }

    TEST_CASE("seasonal IES availability") {
        SystemSpec s = flat_spec(48);
        s.generators = {ies("pv", 100.0)};
        s.cf_profiles["pv"] = TimeSeries(48, 0.5);
        auto a = seasonal_ies_availability(s);
        REQUIRE(a.size() == 4);
        for (auto [season, v] : a) {
            CHECK(v.avg_cf == doctest::Approx(0.5));
            CHECK(v.rel_availability == doctest::Approx(0.5));
        }

        TimeSeries spring_only(48, 0.0);
        for (const auto& r : s.season_calendar.ranges(Season::spring)) {
            for (int h = r.begin; h < r.end; ++h) spring_only[h] = 0.8;
        }
        s.cf_profiles["pv"] = spring_only;
        for (auto [season, v] : seasonal_ies_availability(s)) {
            if (season == Season::spring) CHECK(v.rel_availability > 0.0);
            else CHECK(v.rel_availability == 0.0);
        }
        CHECK(seasonal_ies_availability(flat_spec(24)).empty());
    }

    TEST_CASE("state metrics on hand-built systems") {
        // Two IES plants, 100 and 300 MW, mean CFs 0.1 and 0.3.
        SystemSpec s = flat_spec(4);
        s.generators = {ies("a", 100.0), ies("b", 300.0)};
        s.cf_profiles["a"] = {0.1, 0.1, 0.1, 0.1};
        s.cf_profiles["b"] = {0.0, 0.6, 0.0, 0.6};
        BaselineResult b = run_baseline(s);
        ViabilityCurve c;
        c.state = "FL";
        ViabilityPoint p;
        p.x_power_mw = 1.0;
        c.points.push_back(p);
        StateMetrics m = compute_state_metrics(s, b, c);
        CHECK(*m.avg_ies_cf == doctest::Approx(0.25));
        CHECK(*m.solar_share == doctest::Approx(1.0));
        CHECK(*m.thermal_participation == 0.0);
        CHECK_FALSE(m.thermal_utilization.has_value());

        // One gas unit serving all load at full capacity.
        SystemSpec g = flat_spec(4);
        GeneratorAsset gas;
        gas.id = "gas";
        gas.balancing_area = "p1";
        gas.state = "FL";
        gas.technology = Technology::gas;
        gas.capacity_mw = 100.0;
        gas.variable_cost = 20.0;
        g.generators = {gas};
        g.reserve_fraction = 0.0;
        BaselineResult gb = run_baseline(g);
        StateMetrics gm = compute_state_metrics(g, gb, c);
        CHECK(*gm.thermal_participation == doctest::Approx(1.0));
        CHECK(*gm.thermal_utilization == doctest::Approx(1.0));
        CHECK(*gm.alpha == doctest::Approx(0.01));
    }

    TEST_CASE("national roll-up additivity") {
        const SystemSpec s = toy_spec();
        BaselineResult b = run_baseline(s);
        ViabilityPoint p = viability_at(s, 1.0, b.q_star);
        ViabilityPoint w = run_without_ldes(s, b.q_star);
        StateRollupInput in{&s, &b, &p, &w};

        NationalRollup one = national_rollup({in});
        CHECK(one.states == std::vector<std::string>{"TOY"});
        CHECK(one.q_star == doctest::Approx(b.q_star));
        CHECK(one.avoided_cost == doctest::Approx(p.avoided_cost));
        CHECK(one.ldes_power_mw == 1.0);
        CHECK(one.baseline_cost.total == doctest::Approx(b.breakdown.total));
        CHECK(one.replacement_delta_mw.at("solar") == doctest::Approx(2.0).epsilon(1e-6));
        CHECK(one.replacement_delta_mw.at("gas") == doctest::Approx(-1.0));

        NationalRollup two = national_rollup({in, in});
        CHECK(two.q_star == 2.0 * one.q_star);
        CHECK(two.avoided_cost == 2.0 * one.avoided_cost);
        CHECK(two.opportunity_cost.total == 2.0 * one.opportunity_cost.total);
        for (const auto& [k, v] : one.opportunity_capacity_mw) CHECK(two.opportunity_capacity_mw.at(k) == 2.0 * v);

        ViabilityPoint negative = p;
        negative.c_vc_per_kw = -1.0;
        StateRollupInput neg{&s, &b, &negative, nullptr};
        NationalRollup ex = national_rollup({in, neg});
        CHECK(ex.excluded_states.size() == 1);
        CHECK(ex.q_star == one.q_star);

        SystemSpec longer = random_instance(2);
        BaselineResult lb = run_baseline(longer);
        ViabilityPoint lp = viability_at(longer, 10.0, lb.q_star);
        if (longer.horizon_h != s.horizon_h) {
            CHECK_THROWS_AS(national_rollup({in, StateRollupInput{&longer, &lb, &lp, nullptr}}), ValidationError);
        }
    }
}
