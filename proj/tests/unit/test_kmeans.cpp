#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/error.hpp"
#include "ldes/ingestion.hpp"
#include "ldes/kmeans.hpp"

#include <algorithm>
#include <map>
#include <random>

using namespace ldes;
using namespace ldes::testing;

namespace {

GeneratorAsset unit(std::string id, std::string ba, double vc, double cap) {
    GeneratorAsset g;
    g.id = std::move(id);
    g.balancing_area = std::move(ba);
    g.state = "XX";
    g.technology = Technology::gas;
    g.capacity_mw = cap;
    g.variable_cost = vc;
    g.fom_cost = 1000.0 * vc;
    return g;
}

std::map<std::string, double> capacity_by_ba(const std::vector<GeneratorAsset>& gens) {
    std::map<std::string, double> out;
    for (const auto& g : gens) out[g.balancing_area] += g.capacity_mw;
    return out;
}

}  // namespace

TEST_SUITE("kmeans") {
    TEST_CASE("five-unit fixture matches the exhaustive partition") {
        const std::vector<double> costs = {10, 11, 50, 52, 90};
        Partition oracle = brute_force_partition(costs, 3);
        REQUIRE(oracle.groups.size() == 3);

        KMeansResult km = kmeans_1d(costs, 3, 42);
        std::vector<std::vector<double>> groups(km.centers.size());
        for (std::size_t i = 0; i < costs.size(); ++i) groups[km.labels[i]].push_back(costs[i]);
        std::sort(groups.begin(), groups.end());
        CHECK(groups == oracle.groups);
        CHECK(km.inertia == doctest::Approx(oracle.inertia).epsilon(1e-12));

        std::vector<GeneratorAsset> gens;
        for (std::size_t i = 0; i < costs.size(); ++i) gens.push_back(unit("g" + std::to_string(i), "p1", costs[i], 100));
        auto out = cluster_generators(gens, 3, 42);
        REQUIRE(out.size() == 3);
        std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.variable_cost < b.variable_cost; });
        CHECK(out[0].capacity_mw == 200.0);
        CHECK(out[1].capacity_mw == 200.0);
        CHECK(out[2].capacity_mw == 100.0);
        CHECK(out[0].variable_cost == doctest::Approx(10.5));
        CHECK(out[1].variable_cost == doctest::Approx(51.0));
        CHECK(out[2].variable_cost == doctest::Approx(90.0));
    }

    TEST_CASE("random 1-D sets match the exhaustive optimum") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 100.0);
        for (int rep = 0; rep < 30; ++rep) {
            const int n = 3 + static_cast<int>(rng() % 5);
            const int k = 1 + static_cast<int>(rng() % 3);
            std::vector<double> v(n);
            for (double& x : v) x = std::round(u(rng));
            Partition oracle = brute_force_partition(v, k);
            KMeansResult km = kmeans_1d(v, k, 11);
            CHECK(km.inertia == doctest::Approx(oracle.inertia).epsilon(1e-9));
        }
    }

    TEST_CASE("fewer units than clusters are left unchanged") {
        std::vector<GeneratorAsset> gens = {unit("a", "p1", 20, 50), unit("b", "p1", 40, 70)};
        auto out = cluster_generators(gens, 3, 1);
        CHECK(out == gens);
    }

    TEST_CASE("capacity and weighted cost are conserved per balancing area") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<GeneratorAsset> gens;
        for (int i = 0; i < 40; ++i) {
            gens.push_back(unit("g" + std::to_string(i), i % 3 == 0 ? "p1" : "p2", 5 + 90 * u(rng), 1 + 500 * u(rng)));
        }
        auto out = cluster_generators(gens, 3, 5);
        auto before = capacity_by_ba(gens);
        auto after = capacity_by_ba(out);
        for (const auto& [ba, cap] : before) {
            CHECK(std::abs(after[ba] - cap) <= 1e-9 * cap);
            double vc_in = 0.0, vc_out = 0.0;
            for (const auto& g : gens) if (g.balancing_area == ba) vc_in += g.capacity_mw * g.variable_cost;
            for (const auto& g : out) if (g.balancing_area == ba) vc_out += g.capacity_mw * g.variable_cost;
            CHECK(std::abs(vc_out - vc_in) <= 1e-9 * vc_in);
        }
        CHECK(out.size() == 6);
        CHECK(cluster_generators(gens, 3, 5) == out);
    }

    TEST_CASE("argument checks and empty input") {
        CHECK_THROWS_AS(cluster_generators({}, 0, 1), ArgumentError);
        CHECK(cluster_generators({}, 3, 1).empty());
        const std::vector<double> one = {5.0};
        CHECK(kmeans_1d(one, 3, 1).centers.size() == 1);
    }
}
