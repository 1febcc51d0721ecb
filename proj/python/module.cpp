#include "ldes/analytics.hpp"
#include "ldes/error.hpp"
#include "ldes/kmeans.hpp"
#include "ldes/mps.hpp"
#include "ldes/pipeline.hpp"
#include "ldes/report.hpp"
#include "ldes/sweep.hpp"
#include "ldes/synthetic.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <json.hpp>

namespace py = pybind11;
using namespace ldes;
using nlohmann::json;

namespace {

PipelineOptions make_options(std::optional<std::vector<double>> grid, int refine,
                             std::optional<double> duration_h, std::optional<double> rte,
                             std::vector<std::string> states, const std::string& backend, int jobs) {
    PipelineOptions o;
    o.grid_mw = std::move(grid);
    o.refine_points = refine;
    o.ldes_duration_h = duration_h;
    o.ldes_rte = rte;
    o.states = std::move(states);
    auto b = parse_backend(backend);
    if (!b) throw ArgumentError("unknown backend '" + backend + "'");
    o.backend = *b;
    o.jobs = jobs;
    return o;
}

std::string analyze(const std::filesystem::path& input_dir, std::optional<std::vector<double>> grid,
                    int refine, std::optional<double> duration_h, std::optional<double> rte,
                    const std::string& backend) {
    PipelineOptions o = make_options(std::move(grid), refine, duration_h, rte, {}, backend, 1);
    auto inputs = discover_states(input_dir, o);
    if (inputs.size() != 1) throw ArgumentError("analyze expects a single-state directory");
    SystemSpec spec;
    BaselineResult b;
    ViabilityCurve c;
    ViabilityPoint w;
    {
        py::gil_scoped_release release;
        spec = prepare_state(inputs.front(), o);
        RunOptions ro;
        ro.solve.backend = o.backend;
        b = run_baseline(spec, ro);
        const std::vector<double> g = o.grid_mw ? *o.grid_mw
                                                : log_grid(kDefaultGridLoMw, kDefaultGridHiMw, kDefaultGridPoints);
        const int r = refine >= 0 ? refine : (o.grid_mw ? 0 : kDefaultRefinePoints);
        c = sweep_refined(spec, g, r, b.q_star, ro);
        w = run_without_ldes(spec, b.q_star, ro);
    }
    json j = {{"baseline", baseline_json(spec, b)}, {"curve", curve_json(c, b, &w)}};
    j["metrics"] = c.points.empty() ? json(nullptr) : metrics_json(compute_state_metrics(spec, b, c));
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "LDES viability cost engine";

    auto base = py::register_exception<Error>(m, "LdesError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<StateError>(m, "StateError", base.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
    py::register_exception<SolveError>(m, "SolveError", base.ptr());

    m.def("version", [] { return std::string(version()); });

    m.def("validate", [](const std::filesystem::path& input_dir) {
        return validate_inputs(input_dir, PipelineOptions{});
    }, py::arg("input_dir"));

    m.def("run", [](const std::filesystem::path& input_dir, const std::filesystem::path& out_dir,
                    std::optional<std::vector<double>> grid, int refine, std::optional<double> duration_h,
                    std::optional<double> rte, std::vector<std::string> states, const std::string& backend,
                    int jobs, bool export_lp) {
        PipelineOptions o = make_options(std::move(grid), refine, duration_h, rte, std::move(states), backend, jobs);
        o.export_lp = export_lp;
        PipelineOutcome r;
        {
            py::gil_scoped_release release;
            r = run_pipeline(input_dir, out_dir, o);
        }
        py::dict d;
        d["states"] = r.states;
        d["failures"] = r.failures;
        std::vector<std::string> outputs;
        for (const auto& p : r.outputs) outputs.push_back(p.string());
        d["outputs"] = outputs;
        return d;
    }, py::arg("input_dir"), py::arg("out_dir"), py::arg("grid") = py::none(), py::arg("refine") = -1,
       py::arg("duration_h") = py::none(), py::arg("rte") = py::none(),
       py::arg("states") = std::vector<std::string>{}, py::arg("backend") = "ipm", py::arg("jobs") = 1,
       py::arg("export_lp") = false);

    m.def("analyze", &analyze, py::arg("input_dir"), py::arg("grid") = py::none(), py::arg("refine") = -1,
          py::arg("duration_h") = py::none(), py::arg("rte") = py::none(), py::arg("backend") = "ipm");

    m.def("export_mps", [](const std::filesystem::path& input_dir, const std::filesystem::path& path,
                           std::optional<double> x_power_mw) {
        PipelineOptions o;
        auto inputs = discover_states(input_dir, o);
        if (inputs.size() != 1) throw ArgumentError("export_mps expects a single-state directory");
        SystemSpec spec = prepare_state(inputs.front(), o);
        if (!x_power_mw) {
            write_mps(build_baseline_lp(spec), path, spec.state + "_baseline");
            return run_baseline(spec).q_star;
        }
        const double q = run_baseline(spec).q_star;
        write_mps(build_opportunity_lp(spec, ModelMode::opportunity(*x_power_mw, q, OpportunityForm::replacement)),
                  path, spec.state + "_opportunity");
        return q;
    }, py::arg("input_dir"), py::arg("path"), py::arg("x_power_mw") = py::none());

    m.def("classify_threshold", &classify_threshold, py::arg("results"), py::arg("threshold"));

    m.def("kmeans_1d", [](const std::vector<double>& values, int k, std::uint64_t seed, int restarts) {
        KMeansResult r = kmeans_1d(values, k, seed, restarts);
        return py::make_tuple(r.labels, r.centers, r.inertia);
    }, py::arg("values"), py::arg("k"), py::arg("seed") = 42, py::arg("restarts") = 10);

    m.def("parse_grid", &parse_grid, py::arg("text"));
    m.def("log_grid", &log_grid, py::arg("lo_mw"), py::arg("hi_mw"), py::arg("n"));

    m.def("write_synthetic_state", [](const std::filesystem::path& dir, const std::string& state, int horizon_h,
                                      std::uint64_t seed, double peak_load_mw, double thermal_mw, double solar_mw,
                                      double wind_mw, double spring_boost) {
        SyntheticOptions o;
        o.state = state;
        o.horizon_h = horizon_h;
        o.seed = seed;
        o.peak_load_mw = peak_load_mw;
        o.thermal_mw = thermal_mw;
        o.solar_mw = solar_mw;
        o.wind_mw = wind_mw;
        o.spring_boost = spring_boost;
        SystemSpec s = synthetic_state(o);
        write_state_dir(s, synthetic_config(s), dir);
    }, py::arg("dir"), py::arg("state") = "SYN", py::arg("horizon_h") = 168, py::arg("seed") = 1,
       py::arg("peak_load_mw") = 1000.0, py::arg("thermal_mw") = 700.0, py::arg("solar_mw") = 400.0,
       py::arg("wind_mw") = 400.0, py::arg("spring_boost") = 0.0);
}
