#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/error.hpp"
#include "ldes/formulation.hpp"
#include "ldes/mps.hpp"
#include "ldes/solver.hpp"

#include <random>

using namespace ldes;
using namespace ldes::testing;

namespace {

const Backend kBackends[] = {Backend::interior_point, Backend::simplex};

SolveOptions with(Backend b) {
    SolveOptions o;
    o.backend = b;
    return o;
}

}  // namespace

TEST_SUITE("solver") {
    TEST_CASE("trivial programs on both backends") {
        for (Backend b : kBackends) {
            CAPTURE(to_string(b));
            LinearProgram lp;
            int x = lp.add_variable("x", -kInf, kInf, 1.0);
            lp.add_constraint("lo", {{x, 1.0}}, RowSense::greater_equal, 1.0);
            SolveResult r = solve(lp, with(b));
            REQUIRE(r.optimal());
            CHECK(r.objective == doctest::Approx(1.0));

            lp.add_constraint("hi", {{x, 1.0}}, RowSense::less_equal, 0.0);
            CHECK(solve(lp, with(b)).status == SolveStatus::infeasible);

            LinearProgram up;
            up.sense = ObjectiveSense::maximize;
            up.add_variable("x", -kInf, kInf, 1.0);
            CHECK(solve(up, with(b)).status == SolveStatus::unbounded);
        }
    }

    TEST_CASE("small production problem agrees across backends") {
        LinearProgram lp;
        lp.sense = ObjectiveSense::maximize;
        int a = lp.add_variable("a", 0, kInf, 3);
        int b = lp.add_variable("b", 0, 4, 5);
        lp.add_constraint("r1", {{a, 1}, {b, 2}}, RowSense::less_equal, 14);
        lp.add_constraint("r2", {{a, 3}, {b, -1}}, RowSense::greater_equal, 0);
        lp.add_constraint("r3", {{a, 1}, {b, -1}}, RowSense::less_equal, 2);
        lp.objective_offset = 7.0;
        for (Backend be : kBackends) {
            SolveResult r = solve(lp, with(be));
            REQUIRE(r.optimal());
            // a = 6, b = 4 by hand.
            CHECK(r.objective == doctest::Approx(3 * 6 + 5 * 4 + 7.0).epsilon(1e-9));
            CHECK(r.value(lp, "a") == doctest::Approx(6.0));
        }
    }

    TEST_CASE("verify evaluates rows directly") {
        LinearProgram lp;
        int x = lp.add_variable("x", 0, 10);
        int y = lp.add_variable("y", 0, 10);
        lp.add_constraint("e", {{x, 1}, {y, 1}}, RowSense::equal, 2);
        Residuals ok = verify(lp, std::vector<double>{1.0, 1.0});
        CHECK(ok.max_constraint_residual == 0.0);
        CHECK(ok.max_bound_violation == 0.0);
        Residuals bad = verify(lp, std::map<std::string, double>{{"x", 1.0}, {"y", 1.5}});
        CHECK(bad.max_constraint_residual == doctest::Approx(0.5));
        CHECK(bad.worst_constraint == 0);
        CHECK_THROWS_AS(verify(lp, std::map<std::string, double>{{"x", 1.0}}), ArgumentError);
        CHECK_THROWS_AS(verify(lp, std::vector<double>{1.0}), ArgumentError);
    }

    TEST_CASE("malformed programs are rejected") {
        LinearProgram lp;
        lp.add_variable("x", 1, 0);
        CHECK_THROWS_AS(solve(lp), ArgumentError);
        LinearProgram dup;
        dup.add_variable("x", 0, 1);
        CHECK_THROWS_AS(dup.add_variable("x", 0, 1), ArgumentError);
    }

    TEST_CASE("toy baseline solved to residuals below 1e-6") {
        DispatchModel m = build_model(toy_spec(), ModelMode::baseline());
        SolveResult r = solve(m.lp);
        REQUIRE(r.optimal());
        Residuals res = verify(m.lp, r.primal);
        CHECK(res.max_constraint_residual <= 1e-6);
        CHECK(res.max_bound_violation <= 1e-6);
    }

    TEST_CASE("iteration limit is a status, not an exception") {
        DispatchModel m = build_model(random_instance(3), ModelMode::baseline());
        SolveOptions o;
        o.limits.iterations = 1;
        SolveResult r = solve(m.lp, o);
        CHECK(r.status == SolveStatus::iteration_limit);
    }

    TEST_CASE("MPS text round trip preserves the program") {
        DispatchModel m = build_model(random_instance(5), ModelMode::opportunity(20.0, 1e6));
        LinearProgram back = parse_mps(to_mps(m.lp, "rt"));
        REQUIRE(back.num_variables() == m.lp.num_variables());
        REQUIRE(back.num_constraints() == m.lp.num_constraints());
        CHECK(back.sense == m.lp.sense);
        CHECK(back.objective_offset == m.lp.objective_offset);
        for (int j = 0; j < back.num_variables(); ++j) {
            CHECK(back.variable(j).name == m.lp.variable(j).name);
            CHECK(back.variable(j).lower == m.lp.variable(j).lower);
            CHECK(back.variable(j).upper == m.lp.variable(j).upper);
            CHECK(back.variable(j).objective == m.lp.variable(j).objective);
        }
        SolveResult a = solve(m.lp);
        SolveResult b = solve(back);
        REQUIRE(a.optimal());
        REQUIRE(b.optimal());
        CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-12));
    }

    TEST_CASE("bad MPS text raises a validation error") {
        CHECK_THROWS_AS(parse_mps("ROWS\n N obj\nBOUNDARY\n"), ValidationError);
        CHECK_THROWS_AS(parse_mps("ROWS\n N obj\nCOLUMNS\n x obj abc\n"), ValidationError);
    }
}
