#include "doctest.h"
#include "fixtures.hpp"

#include "ldes/ingestion.hpp"
#include "ldes/report.hpp"
#include "ldes/synthetic.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace ldes;
using namespace ldes::testing;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string output;
};

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run cli(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "ldes_cli_log.txt";
    const std::string cmd = std::string("'") + LDES_CLI_PATH + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.output = slurp(log);
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

fs::path copy_toy(const std::string& name) {
    fs::path d = scratch_dir(name);
    fs::copy(toy_dir(), d, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    return d;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("validate: ok, truncated profile, missing key") {
        Run ok = cli("validate " + q(toy_dir()));
        CHECK(ok.code == 0);

        fs::path trunc = copy_toy("cli_trunc");
        write_text(trunc / "profiles.csv", "asset_id,hour,cf\nsolar_cand,0,1\n");
        Run t = cli("validate " + q(trunc));
        CHECK(t.code == 2);
        CHECK(t.output.find("solar_cand") != std::string::npos);

        fs::path nokey = copy_toy("cli_nokey");
        write_text(nokey / "config.txt", "state = TOY\n");
        Run k = cli("validate " + q(nokey));
        CHECK(k.code == 2);
        CHECK(k.output.find("horizon_h") != std::string::npos);
    }

    TEST_CASE("run: toy curve and artifacts") {
        fs::path out = scratch_dir("cli_toy_out");
        Run r = cli("run " + q(toy_dir()) + " " + q(out) + " --grid 1,2,4 --export-lp -q");
        REQUIRE(r.code == 0);
        json curve = json::parse(slurp(out / "curve.json"));
        CHECK(curve["c_vc_max"].get<double>() == doctest::Approx(0.05).epsilon(1e-6));
        CHECK(curve["x_at_max_mw"].get<double>() == 1.0);
        CHECK(curve["schema_version"] == kSchemaVersion);
        json base = json::parse(slurp(out / "baseline.json"));
        CHECK(base["q_star"].get<double>() == doctest::Approx(110.0));
        for (const char* f : {"metrics.json", "manifest.json", "curve.csv", "seasonal.csv", "lp/baseline.mps",
                              "lp/opportunity.mps"}) {
            CHECK_MESSAGE(fs::exists(out / f), f);
        }
        json manifest = json::parse(slurp(out / "manifest.json"));
        CHECK(manifest["failures"].empty());
        CHECK(manifest["outputs_sha256"]["curve.json"] == sha256_file(out / "curve.json"));
    }

    TEST_CASE("run: solver failure exits 3 and keeps the manifest") {
        fs::path out = scratch_dir("cli_fail_out");
        Run r = cli("run " + q(toy_dir()) + " " + q(out) + " --grid 1 --iteration-limit 1 -q");
        CHECK(r.code == 3);
        CHECK(r.output.find("TOY") != std::string::npos);
        CHECK(r.output.find("baseline") != std::string::npos);
        REQUIRE(fs::exists(out / "manifest.json"));
        json manifest = json::parse(slurp(out / "manifest.json"));
        REQUIRE(manifest["failures"].size() >= 1);
    }

    TEST_CASE("I/O problems exit 4") {
        Run missing = cli("run " + q(fs::temp_directory_path() / "ldes_no_such_dir") + " " +
                          q(scratch_dir("cli_io_out")) + " -q");
        CHECK(missing.code == 4);

        fs::path file = scratch_dir("cli_blocker") / "plain_file";
        write_text(file, "x");
        Run blocked = cli("run " + q(toy_dir()) + " " + q(file / "out") + " --grid 1 -q");
        CHECK(blocked.code == 4);
    }

    TEST_CASE("bad arguments exit 2") {
        CHECK(cli("run " + q(toy_dir()) + " /tmp/x --backend nope -q").code == 2);
        CHECK(cli("run " + q(toy_dir()) + " /tmp/x --grid 2,1 -q").code == 2);
        CHECK(cli("frobnicate").code == 2);
        CHECK(cli("run " + q(toy_dir())).code == 2);
        CHECK(cli("--help").code == 0);
    }

    TEST_CASE("--jobs 4 and --jobs 1 give byte-identical outputs") {
        SyntheticOptions o;
        o.horizon_h = 48;
        o.state = "DET";
        SystemSpec s = synthetic_state(o);
        fs::path in = scratch_dir("cli_det_in");
        write_state_dir(s, synthetic_config(s), in);
        fs::path a = scratch_dir("cli_det_a");
        fs::path b = scratch_dir("cli_det_b");
        REQUIRE(cli("run " + q(in) + " " + q(a) + " --grid log:10:1000:5 --refine 2 --jobs 1 -q").code == 0);
        REQUIRE(cli("run " + q(in) + " " + q(b) + " --grid log:10:1000:5 --refine 2 --jobs 4 -q").code == 0);
        for (const char* f : {"baseline.json", "curve.json", "metrics.json", "curve.csv", "seasonal.csv"}) {
            CHECK_MESSAGE(slurp(a / f) == slurp(b / f), f);
        }
        json ma = json::parse(slurp(a / "manifest.json"));
        json mb = json::parse(slurp(b / "manifest.json"));
        CHECK(ma["outputs_sha256"] == mb["outputs_sha256"]);
    }
}
