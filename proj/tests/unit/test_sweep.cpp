#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/error.hpp"
#include "ldes/sweep.hpp"

#include <cmath>

using namespace ldes;
using namespace ldes::testing;

namespace {

ViabilityCurve curve_of(std::vector<std::pair<double, double>> pts) {
    ViabilityCurve c;
    c.state = "C";
    c.q_star = 1000.0;
    for (auto [x, v] : pts) {
        ViabilityPoint p;
        p.x_power_mw = x;
        p.c_vc_per_kw = v;
        p.avoided_cost = v * 1000.0 * x;
        c.points.push_back(p);
    }
    return c;
}

}  // namespace

TEST_SUITE("sweep") {
    TEST_CASE("toy baseline and curve") {
        const SystemSpec s = toy_spec();
        BaselineResult b = run_baseline(s);
        CHECK(b.q_star == doctest::Approx(110.0).epsilon(1e-9));
        CHECK(b.thermal_capacity_mw == 1.0);
        for (const auto& [id, mw] : b.dispatch.investments) CHECK(mw == 0.0);

        for (OpportunityForm form : {OpportunityForm::replacement, OpportunityForm::viability}) {
            RunOptions o;
            o.form = form;
            ViabilityCurve c = sweep_curve(s, {1, 2, 4}, b.q_star, o);
            REQUIRE(c.points.size() == 3);
            CHECK(c.points[0].c_vc_per_mw() == doctest::Approx(50.0).epsilon(1e-6));
            CHECK(c.points[1].c_vc_per_mw() == doctest::Approx(25.0).epsilon(1e-6));
            CHECK(c.points[2].c_vc_per_mw() == doctest::Approx(12.5).epsilon(1e-6));
            for (const auto& p : c.points) {
                CHECK(p.avoided_cost == doctest::Approx(50.0).epsilon(1e-6));
                CHECK(p.q_over == 0.0);
            }
            MaxViability mv = max_viability(c);
            CHECK(mv.c_vc_max_per_kw == doctest::Approx(0.05).epsilon(1e-6));
            CHECK(mv.x_at_max_mw == 1.0);
            CHECK(mv.viable);
            CHECK(*min_viable_capacity(c).x_mw == 1.0);
            CHECK(c.failures.empty());
        }
    }

    TEST_CASE("without LDES the toy replacement stays at baseline cost or above") {
        const SystemSpec s = toy_spec();
        ViabilityPoint p = run_without_ldes(s, 110.0);
        CHECK(p.x_power_mw == 0.0);
        CHECK(p.c_vc_per_kw == 0.0);
        CHECK(p.dispatch.find_storage("TOY_ldes") == nullptr);
        // Without storage, 1 MW of solar serves hour 0 and hour 1 is shed.
        CHECK(p.opportunity_cost > 110.0);
        CHECK(p.q_over == doctest::Approx(p.opportunity_cost - 110.0));
    }

    TEST_CASE("one-point grid") {
        ViabilityCurve c = sweep_curve(toy_spec(), {3}, 110.0);
        REQUIRE(c.points.size() == 1);
        CHECK(max_viability(c).x_at_max_mw == 3.0);
    }

    TEST_CASE("grid validation") {
        const SystemSpec s = toy_spec();
        CHECK_THROWS_AS(sweep_curve(s, {}, 110.0), ArgumentError);
        CHECK_THROWS_AS(sweep_curve(s, {2, 1}, 110.0), ArgumentError);
        CHECK_THROWS_AS(sweep_curve(s, {0, 1}, 110.0), ArgumentError);
        CHECK_THROWS_AS(viability_at(s, -1.0, 110.0), ArgumentError);
    }

    TEST_CASE("max, min-viable and alpha helpers") {
        ViabilityCurve c = curve_of({{1, -3}, {2, -1}, {4, 2}, {8, 2}, {16, 1}});
        MaxViability mv = max_viability(c);
        CHECK(mv.c_vc_max_per_kw == 2.0);
        CHECK(mv.x_at_max_mw == 4.0);
        MinViable mn = min_viable_capacity(c);
        CHECK(*mn.x_mw == 4.0);
        CHECK(mn.bracket->first == 2.0);
        CHECK(mn.bracket->second == 4.0);

        ViabilityCurve neg = curve_of({{1, -3}, {2, -1}});
        CHECK_FALSE(min_viable_capacity(neg).x_mw.has_value());
        CHECK_FALSE(max_viability(neg).viable);
        CHECK_THROWS_AS(max_viability(ViabilityCurve{}), ArgumentError);

        CHECK(*alpha_ratio(50000, 100000) == 0.5);
        CHECK(*alpha_ratio(7, 7) == 1.0);
        CHECK_FALSE(alpha_ratio(5, 0).has_value());
    }

    TEST_CASE("log and refinement grids") {
        auto g = log_grid(100, 10000, 3);
        REQUIRE(g.size() == 3);
        CHECK(g[0] == 100.0);
        CHECK(g[1] == doctest::Approx(1000.0));
        CHECK(g[2] == 10000.0);
        CHECK(log_grid(5, 5, 1) == std::vector<double>{5.0});

        ViabilityCurve c = curve_of({{1, 0}, {10, 3}, {100, 1}});
        auto r = refinement_grid(c, 4);
        REQUIRE(r.size() == 4);
        for (double x : r) {
            CHECK(x > 1.0);
            CHECK(x < 100.0);
            CHECK(x != 10.0);
        }
    }

    TEST_CASE("refined sweep merges and keeps order") {
        const SystemSpec s = toy_spec();
        ViabilityCurve c = sweep_refined(s, {1, 4}, 2, 110.0);
        REQUIRE(c.points.size() >= 3);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            CHECK(c.points[i].x_power_mw > c.points[i - 1].x_power_mw);
        }
    }

    TEST_CASE("parallel sweep equals the serial one") {
        SystemSpec s = random_instance(12);
        BaselineResult b = run_baseline(s);
        RunOptions one;
        RunOptions four;
        four.jobs = 4;
        auto a = sweep_curve(s, {5, 10, 20, 40, 80}, b.q_star, one);
        auto c = sweep_curve(s, {5, 10, 20, 40, 80}, b.q_star, four);
        REQUIRE(a.points.size() == c.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].c_vc_per_kw == c.points[i].c_vc_per_kw);
            CHECK(a.points[i].avoided_cost == c.points[i].avoided_cost);
        }
    }
}
