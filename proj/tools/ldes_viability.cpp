// ldes-viability: baseline, opportunity sweep and metrics from CSV inputs.
//
// Exit codes: 0 ok, 2 invalid input or arguments, 3 solve failure, 4 I/O.

#include "ldes/error.hpp"
#include "ldes/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kSolveFailed = 3;
constexpr int kIo = 4;

template <class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const ldes::IoError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIo;
    } catch (const ldes::SolveError& e) {
        fmt::print(stderr, "solve failed: {}\n", e.what());
        return kSolveFailed;
    } catch (const ldes::ConsistencyError& e) {
        fmt::print(stderr, "solve failed: {}\n", e.what());
        return kSolveFailed;
    } catch (const ldes::Error& e) {
        fmt::print(stderr, "invalid: {}\n", e.what());
        return kInvalid;
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kIo;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDES viability cost from baseline and opportunity dispatch models"};
    app.set_version_flag("--version", std::string(ldes::version()));
    app.require_subcommand(1);

    ldes::PipelineOptions opt;
    std::string input_dir, out_dir, config, grid, backend = "ipm", states;
    std::uint64_t seed = 0;
    double duration = 0.0, rte = 0.0;
    int k = 0;

    auto* validate = app.add_subcommand("validate", "Check an input directory");
    validate->add_option("input_dir", input_dir, "State directory or directory of states")->required();
    validate->add_option("--config", config, "Config file for a single-state directory");

    auto* run = app.add_subcommand("run", "Solve baseline and sweep LDES capacity");
    run->add_option("input_dir", input_dir, "State directory or directory of states")->required();
    run->add_option("out_dir", out_dir, "Output directory")->required();
    run->add_option("--config", config, "Config file for a single-state directory");
    run->add_option("--states", states, "Comma-separated subset of states");
    run->add_option("--grid", grid, "Capacities in MW: 'a,b,c' or 'log:lo:hi:n'");
    run->add_option("--refine", opt.refine_points, "Extra capacities around the best point")->check(CLI::NonNegativeNumber);
    auto* dur_opt = run->add_option("--duration-h", duration, "LDES duration in hours")->check(CLI::PositiveNumber);
    auto* rte_opt = run->add_option("--rte", rte, "LDES round-trip efficiency")->check(CLI::Range(0.0, 1.0));
    auto* seed_opt = run->add_option("--seed", seed, "Clustering seed");
    auto* k_opt = run->add_option("--k", k, "Clusters per balancing area and technology")->check(CLI::PositiveNumber);
    run->add_option("--backend", backend, "LP backend: ipm or simplex");
    run->add_option("--iteration-limit", opt.limits.iterations, "Iteration cap per LP solve (0: backend default)")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--time-limit", opt.limits.seconds, "Seconds per LP solve (0: none)")->check(CLI::NonNegativeNumber);
    run->add_option("--jobs", opt.jobs, "Parallel sweep workers")->check(CLI::PositiveNumber);
    run->add_flag("--export-lp", opt.export_lp, "Write MPS files of the baseline and best opportunity LP");
    bool quiet = false;
    run->add_flag("-q,--quiet", quiet, "No progress output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    if (!config.empty()) opt.config = config;

    if (validate->parsed()) {
        return guarded([&] {
            auto names = ldes::validate_inputs(input_dir, opt);
            for (const auto& n : names) fmt::print("{}: ok\n", n);
            return kOk;
        });
    }

    return guarded([&] {
        auto b = ldes::parse_backend(backend);
        if (!b) throw ldes::ArgumentError(fmt::format("unknown backend '{}'", backend));
        opt.backend = *b;
        if (!grid.empty()) opt.grid_mw = ldes::parse_grid(grid);
        if (*dur_opt) opt.ldes_duration_h = duration;
        if (*rte_opt) opt.ldes_rte = rte;
        if (*seed_opt) opt.seed = seed;
        if (*k_opt) opt.cluster_k = k;
        if (!states.empty()) {
            std::stringstream ss(states);
            for (std::string s; std::getline(ss, s, ',');) opt.states.push_back(s);
        }
        opt.quiet = quiet;
        auto outcome = ldes::run_pipeline(input_dir, out_dir, opt);
        for (const auto& f : outcome.failures) fmt::print(stderr, "solve failed: {}\n", f);
        return outcome.ok() ? kOk : kSolveFailed;
    });
}
