#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/csv.hpp"
#include "ldes/error.hpp"
#include "ldes/ingestion.hpp"
#include "ldes/report.hpp"

#include <fstream>
#include <numeric>

using namespace ldes;
using namespace ldes::testing;
namespace fs = std::filesystem;

namespace {

// 24-hour directory: one gas unit, one solar plant, one battery.
fs::path day_dir(const std::string& name) {
    fs::path d = scratch_dir(name);
    std::string load = "hour,load_mw\n";
    std::string prof = "asset_id,hour,cf\n";
    for (int h = 0; h < 24; ++h) {
        load += std::to_string(h) + ",100\n";
        prof += "pv," + std::to_string(h) + (h >= 6 && h < 18 ? ",0.5\n" : ",0\n");
    }
    write_text(d / "load.csv", load);
    write_text(d / "profiles.csv", prof);
    write_text(d / "generators.csv",
               "id,ba,state,technology,capacity_mw,variable_cost_per_mwh,fuel_price,heat_rate,"
               "fom_per_kw_yr,ramp_frac_per_h,kind,max_invest_mw,invest_cost_per_kw_yr\n"
               "ng,p1,DAY,gas,120,,3,7.5,12,0.5,existing,,\n"
               "pv,p1,DAY,solar,80,0,,,20,,existing,,\n");
    write_text(d / "storages.csv",
               "id,state,kind,duration_h,power_mw,rte,fom_per_kw_yr,invest_cost_per_kw_yr\n"
               "bat,DAY,sdes_existing,4,25,0.85,8,\n");
    write_text(d / "config.txt", "state = DAY\nhorizon_h = 24\ncandidates.invest_per_kw_yr.solar = 60\n");
    return d;
}

template <class E>
std::string message_of(auto&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return "<no exception>";
}

}  // namespace

TEST_SUITE("ingestion") {
    TEST_CASE("well-formed day directory loads with units normalized") {
        fs::path d = day_dir("day_ok");
        RunConfig cfg = load_config(d / "config.txt");
        SystemSpec s = load_system(d, cfg);
        CHECK(s.horizon_h == 24);
        CHECK(s.generators.size() == 2);
        CHECK(s.storages.size() == 1);
        const GeneratorAsset* ng = s.find_generator("ng");
        REQUIRE(ng);
        CHECK(ng->variable_cost == doctest::Approx(22.5));
        CHECK(ng->fom_cost == doctest::Approx(12000.0));
        CHECK(s.find_storage("bat")->fom_cost == doctest::Approx(8000.0));
        CHECK(s.total_load_mwh() == doctest::Approx(2400.0));
    }

    TEST_CASE("round trip through the CSV schema is exact") {
        fs::path d = day_dir("day_rt");
        RunConfig cfg = load_config(d / "config.txt");
        SystemSpec s = prepare_system(d, cfg);
        fs::path out = scratch_dir("day_rt_out");
        write_system(s, out);
        SystemSpec back = load_system(out, cfg);
        CHECK(back == s);

        SystemSpec r = random_instance(7);
        fs::path out2 = scratch_dir("rand_rt");
        write_system(r, out2);
        CHECK(load_system(out2, config_for(r)) == r);
    }

    TEST_CASE("config text round trip") {
        RunConfig c = parse_config("state = XX\nhorizon_h = 48\nreserve_fraction = 0.07\nclustering.k = 2\n"
                                   "candidates.ies_multiplier.XX = 7\n");
        CHECK(c.state == "XX");
        CHECK(c.rules.multiplier_for("XX") == 7.0);
        CHECK(c.rules.multiplier_for("CT") == 10.0);
        RunConfig back = parse_config(format_config(c));
        CHECK(back.rules == c.rules);
        CHECK(back.reserve_fraction == c.reserve_fraction);
        CHECK(back.cluster_k == 2);
    }

    TEST_CASE("missing config key is named") {
        auto msg = message_of<ValidationError>([] { parse_config("state = XX\n"); });
        CHECK(msg.find("horizon_h") != std::string::npos);
        msg = message_of<ValidationError>([] { parse_config("state = XX\nhorizon_h = 2\nbogus = 1\n"); });
        CHECK(msg.find("bogus") != std::string::npos);
    }

    TEST_CASE("truncated profile cites the asset") {
        fs::path d = day_dir("day_trunc");
        std::string prof = "asset_id,hour,cf\n";
        for (int h = 0; h < 23; ++h) prof += "pv," + std::to_string(h) + ",0.3\n";
        write_text(d / "profiles.csv", prof);
        RunConfig cfg = load_config(d / "config.txt");
        auto msg = message_of<ValidationError>([&] { load_system(d, cfg); });
        CHECK(msg.find("pv") != std::string::npos);
        CHECK(msg.find("23") != std::string::npos);
    }

    TEST_CASE("intermittent asset without profile") {
        fs::path d = day_dir("day_noprof");
        write_text(d / "profiles.csv", "asset_id,hour,cf\n");
        RunConfig cfg = load_config(d / "config.txt");
        auto msg = message_of<ValidationError>([&] { load_system(d, cfg); });
        CHECK(msg.find("intermittent asset without profile") != std::string::npos);
    }

    TEST_CASE("capacity factor outside [0, 1] cites the row") {
        fs::path d = day_dir("day_badcf");
        std::string prof = "asset_id,hour,cf\n";
        for (int h = 0; h < 24; ++h) prof += "pv," + std::to_string(h) + (h == 5 ? ",1.5\n" : ",0.2\n");
        write_text(d / "profiles.csv", prof);
        RunConfig cfg = load_config(d / "config.txt");
        auto msg = message_of<ValidationError>([&] { load_system(d, cfg); });
        CHECK(msg.find(":7:") != std::string::npos);
    }

    TEST_CASE("missing file is an I/O error naming the file") {
        fs::path d = day_dir("day_missing");
        fs::remove(d / "storages.csv");
        RunConfig cfg = load_config(d / "config.txt");
        auto msg = message_of<IoError>([&] { load_system(d, cfg); });
        CHECK(msg.find("storages.csv") != std::string::npos);
        CHECK_THROWS_AS(load_config(d / "nope.txt"), IoError);
    }

    TEST_CASE("candidate construction follows the multipliers") {
        SystemSpec s;
        s.state = "KS";
        s.horizon_h = 2;
        s.load = {1, 1};
        s.season_calendar = SeasonCalendar::meteorological(2);
        GeneratorAsset pv;
        pv.id = "pv";
        pv.balancing_area = "p1";
        pv.state = "KS";
        pv.technology = Technology::solar;
        pv.capacity_mw = 100;
        s.generators = {pv};
        s.cf_profiles["pv"] = {0.5, 0.0};
        StorageAsset bat;
        bat.id = "bat";
        bat.state = "KS";
        bat.duration_h = 2;
        bat.power_mw = 50;
        StorageAsset phs;
        phs.id = "phs";
        phs.state = "KS";
        phs.kind = StorageKind::phs;
        phs.duration_h = 10;
        phs.power_mw = 200;
        s.storages = {bat, phs};
        CandidateRules rules;
        rules.ies_invest_cost[Technology::solar] = 1.0;

        SystemSpec e = build_candidates(s, rules);
        CHECK(e.expanded());
        CHECK(e.find_generator("pv_cand")->max_invest_mw == doctest::Approx(400.0));
        CHECK(e.profile(*e.find_generator("pv_cand")) == s.cf_profiles["pv"]);
        CHECK(e.find_storage("KS_sdes_cand")->max_invest_mw == doctest::Approx(500.0));
        const StorageAsset* ldes = e.find_storage("KS_ldes");
        REQUIRE(ldes);
        CHECK(ldes->duration_h == 100.0);
        CHECK(ldes->rte == 0.425);
        CHECK_THROWS_AS(build_candidates(e, rules), StateError);

        s.state = "CT";
        for (auto& g : s.generators) g.state = "CT";
        for (auto& st : s.storages) st.state = "CT";
        CHECK(build_candidates(s, rules).find_generator("pv_cand")->max_invest_mw == doctest::Approx(1000.0));
    }

    TEST_CASE("csv writer quotes nothing and round-trips numbers") {
        for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456789.123, -0.0}) {
            CHECK(std::stod(csv::format_number(v)) == v);
        }
        csv::Table t = csv::Table::parse("a,b\n1,\n", "mem");
        CHECK(t.number_or(0, 1, 7.0) == 7.0);
        CHECK_THROWS_AS(t.column("c"), ValidationError);
    }
}
