#include "ldes/pipeline.hpp"

#include "ldes/analytics.hpp"
#include "ldes/error.hpp"
#include "ldes/formulation.hpp"
#include "ldes/mps.hpp"
#include "ldes/report.hpp"
#include "ldes/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <set>
#include <sstream>

namespace ldes {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kVersion = "1.0.0";

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void log(const PipelineOptions& o, const std::string& msg) {
    if (!o.quiet) fmt::print(stderr, "{}\n", msg);
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ArgumentError(fmt::format("'{}' is not a number", s));
    return v;
}

json input_digests(const StateInput& in) {
    json j = json::object();
    for (auto name : {kLoadFile, kGeneratorsFile, kStoragesFile, kProfilesFile}) {
        j[std::string(name)] = sha256_file(in.dir / name);
    }
    return j;
}

}  // namespace

std::string_view version() { return kVersion; }

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.rfind("log:", 0) == 0) {
        std::vector<std::string> parts;
        std::stringstream ss(text.substr(4));
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ArgumentError("log grid must read log:<lo>:<hi>:<n>");
        const double n = parse_number(parts[2]);
        if (n != std::floor(n) || n < 1) throw ArgumentError("log grid point count must be a positive integer");
        return log_grid(parse_number(parts[0]), parse_number(parts[1]), static_cast<int>(n));
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(parse_number(p));
    if (out.empty()) throw ArgumentError("empty grid");
    return out;
}

bool is_multi_state(const fs::path& dir) { return !fs::exists(dir / kLoadFile); }

std::vector<StateInput> discover_states(const fs::path& dir, const PipelineOptions& o) {
    if (!fs::is_directory(dir)) throw IoError(fmt::format("input directory {} not found", dir.string()));
    std::vector<StateInput> out;
    if (!is_multi_state(dir)) {
        StateInput in;
        in.dir = dir;
        in.config = o.config ? *o.config : dir / kConfigFile;
        if (!fs::exists(in.config)) throw IoError(fmt::format("config file {} not found", in.config.string()));
        in.name = load_config(in.config).state;
        out.push_back(in);
    } else {
        if (o.config) throw ArgumentError("--config applies to single-state input directories only");
        std::vector<fs::path> subdirs;
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_directory() && fs::exists(e.path() / kConfigFile)) subdirs.push_back(e.path());
        }
        std::sort(subdirs.begin(), subdirs.end());
        for (const auto& d : subdirs) {
            StateInput in{load_config(d / kConfigFile).state, d, d / kConfigFile};
            out.push_back(in);
        }
    }
    if (!o.states.empty()) {
        std::set<std::string> wanted(o.states.begin(), o.states.end());
        std::vector<StateInput> kept;
        for (auto& in : out) {
            if (wanted.erase(in.name)) kept.push_back(in);
        }
        if (!wanted.empty()) throw ArgumentError(fmt::format("unknown state '{}'", *wanted.begin()));
        out = kept;
    }
    std::set<std::string> names;
    for (const auto& in : out) {
        if (!names.insert(in.name).second) throw ValidationError(fmt::format("state {} appears twice", in.name));
    }
    if (out.empty()) throw ValidationError(fmt::format("no state inputs under {}", dir.string()));
    return out;
}

SystemSpec prepare_state(const StateInput& in, const PipelineOptions& o) {
    RunConfig cfg = load_config(in.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.cluster_k) cfg.cluster_k = *o.cluster_k;
    if (o.ldes_duration_h) cfg.rules.ldes_duration_h = *o.ldes_duration_h;
    if (o.ldes_rte) cfg.rules.ldes_rte = *o.ldes_rte;
    SystemSpec spec = prepare_system(in.dir, cfg);
    for (auto& s : spec.storages) {
        if (s.kind != StorageKind::ldes) continue;
        if (o.ldes_duration_h) s.duration_h = *o.ldes_duration_h;
        if (o.ldes_rte) s.rte = *o.ldes_rte;
    }
    validate(spec);
    return spec;
}

std::vector<std::string> validate_inputs(const fs::path& dir, const PipelineOptions& o) {
    std::vector<std::string> names;
    for (const auto& in : discover_states(dir, o)) {
        prepare_state(in, o);
        names.push_back(in.name);
    }
    return names;
}

PipelineOutcome run_pipeline(const fs::path& input_dir, const fs::path& out_dir, const PipelineOptions& o) {
    const auto t_start = std::chrono::steady_clock::now();
    const bool multi = is_multi_state(input_dir);
    std::vector<StateInput> inputs = discover_states(input_dir, o);
    std::vector<SystemSpec> specs;
    for (const auto& in : inputs) specs.push_back(prepare_state(in, o));

    std::vector<double> grid = o.grid_mw ? *o.grid_mw : log_grid(kDefaultGridLoMw, kDefaultGridHiMw, kDefaultGridPoints);
    const int refine = o.refine_points >= 0 ? o.refine_points : (o.grid_mw ? 0 : kDefaultRefinePoints);
    RunOptions ro;
    ro.solve.backend = o.backend;
    ro.solve.limits = o.limits;
    ro.jobs = std::max(1, o.jobs);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

    PipelineOutcome outcome;
    json manifest = {{"schema_version", kSchemaVersion},
                     {"tool", "ldes-viability"},
                     {"tool_version", kVersion},
                     {"backend", to_string(o.backend)},
                     {"jobs", ro.jobs},
                     {"grid_mw", grid},
                     {"refine_points", refine},
                     {"solver_limits", {{"iterations", o.limits.iterations}, {"seconds", o.limits.seconds}}}};
    manifest["seed"] = o.seed ? json(*o.seed) : json(nullptr);
    manifest["overrides"] = {{"ldes_duration_h", o.ldes_duration_h ? json(*o.ldes_duration_h) : json(nullptr)},
                             {"ldes_rte", o.ldes_rte ? json(*o.ldes_rte) : json(nullptr)},
                             {"cluster_k", o.cluster_k ? json(*o.cluster_k) : json(nullptr)}};
    json states_json = json::object();
    json failures = json::array();

    std::vector<BaselineResult> baselines(specs.size());
    std::vector<ViabilityCurve> curves(specs.size());
    std::vector<std::optional<ViabilityPoint>> without(specs.size());
    std::vector<StateMetrics> metrics;
    std::vector<bool> complete(specs.size(), false);

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const SystemSpec& spec = specs[i];
        const StateInput& in = inputs[i];
        outcome.states.push_back(spec.state);
        const fs::path dir = multi ? out_dir / spec.state : out_dir;
        fs::create_directories(dir, ec);
        if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
        json sj = {{"config", fs::relative(in.config, input_dir).generic_string()},
                   {"config_sha256", sha256_file(in.config)},
                   {"inputs_sha256", input_digests(in)}};
        json timings = json::object();
        std::string stage = "baseline";
        try {
            auto t0 = std::chrono::steady_clock::now();
            log(o, fmt::format("{}: baseline", spec.state));
            baselines[i] = run_baseline(spec, ro);
            timings["baseline"] = seconds_since(t0);

            stage = "sweep";
            t0 = std::chrono::steady_clock::now();
            log(o, fmt::format("{}: sweep over {} capacities", spec.state, grid.size()));
            curves[i] = sweep_refined(spec, grid, refine, baselines[i].q_star, ro);
            timings["sweep"] = seconds_since(t0);
            for (const auto& f : curves[i].failures) {
                std::string msg = fmt::format("{} sweep: {}", spec.state, f.message);
                outcome.failures.push_back(msg);
                failures.push_back({{"state", spec.state}, {"stage", "sweep"}, {"x_power_mw", f.x_power_mw}, {"error", f.message}});
            }

            stage = "without_ldes";
            t0 = std::chrono::steady_clock::now();
            without[i] = run_without_ldes(spec, baselines[i].q_star, ro);
            timings["without_ldes"] = seconds_since(t0);

            write_json(dir / "baseline.json", baseline_json(spec, baselines[i]));
            write_json(dir / "curve.json", curve_json(curves[i], baselines[i], &*without[i]));
            write_text(dir / "curve.csv", curve_csv(curves[i]));
            StateMetrics m = compute_state_metrics(spec, baselines[i], curves[i]);
            write_json(dir / "metrics.json", metrics_json(m));
            metrics.push_back(m);
            for (auto name : {"baseline.json", "curve.json", "curve.csv", "metrics.json"}) {
                outcome.outputs.push_back(dir / name);
            }
            complete[i] = !curves[i].points.empty();

            if (o.export_lp) {
                stage = "export_lp";
                const fs::path lp_dir = dir / "lp";
                fs::create_directories(lp_dir, ec);
                write_mps(build_baseline_lp(spec), lp_dir / "baseline.mps", spec.state + "_baseline");
                outcome.outputs.push_back(lp_dir / "baseline.mps");
                if (!curves[i].points.empty()) {
                    const double x = max_viability(curves[i]).x_at_max_mw;
                    write_mps(build_opportunity_lp(spec, ModelMode::opportunity(x, baselines[i].q_star)),
                              lp_dir / "opportunity.mps", spec.state + "_opportunity");
                    outcome.outputs.push_back(lp_dir / "opportunity.mps");
                }
            }
        } catch (const SolveError& e) {
            outcome.failures.push_back(fmt::format("{} {}: {}", spec.state, stage, e.what()));
            failures.push_back({{"state", spec.state}, {"stage", stage}, {"error", e.what()}});
        } catch (const ConsistencyError& e) {
            outcome.failures.push_back(fmt::format("{} {}: {}", spec.state, stage, e.what()));
            failures.push_back({{"state", spec.state}, {"stage", stage}, {"error", e.what()}});
        }
        sj["timings_s"] = timings;
        states_json[spec.state] = sj;
    }

    std::vector<StateRollupInput> roll;
    std::map<std::string, double> c_vc_max;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!complete[i]) continue;
        roll.push_back({&specs[i], &baselines[i], &best_point(curves[i]), without[i] ? &*without[i] : nullptr});
        c_vc_max[specs[i].state] = max_viability(curves[i]).c_vc_max_per_kw;
    }
    write_text(out_dir / "seasonal.csv", seasonal_csv(metrics));
    outcome.outputs.push_back(out_dir / "seasonal.csv");
    if (multi) {
        json rj = rollup_json(national_rollup(roll));
        rj["c_vc_max_by_state"] = c_vc_max;
        rj["ranking"] = classify_threshold(c_vc_max, -std::numeric_limits<double>::infinity());
        write_json(out_dir / "rollup.json", rj);
        outcome.outputs.push_back(out_dir / "rollup.json");
        std::vector<double> values;
        for (const auto& [s, v] : c_vc_max) values.push_back(v);
        double width = 1.0;
        if (!values.empty()) {
            const double hi = *std::max_element(values.begin(), values.end());
            if (hi > 0.0) width = std::pow(10.0, std::floor(std::log10(hi)));
        }
        write_text(out_dir / "histogram.csv", histogram_csv(histogram(values, width, 0.0)));
        outcome.outputs.push_back(out_dir / "histogram.csv");
    }

    json outputs = json::object();
    for (const auto& p : outcome.outputs) outputs[fs::relative(p, out_dir).generic_string()] = sha256_file(p);
    manifest["states"] = states_json;
    manifest["outputs_sha256"] = outputs;
    manifest["failures"] = failures;
    manifest["wall_time_s"] = seconds_since(t_start);
    write_json(out_dir / "manifest.json", manifest);
    return outcome;
}

}  // namespace ldes
