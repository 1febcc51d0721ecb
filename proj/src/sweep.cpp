#include "ldes/sweep.hpp"

#include "ldes/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fmt/format.h>
#include <thread>

namespace ldes {

namespace {

struct Solved {
    DispatchModel model;
    SolveResult result;
};

Solved solve_model(const SystemSpec& spec, const ModelMode& mode, const RunOptions& opt,
                   const std::string& stage) {
    Solved s{build_model(spec, mode), {}};
    s.result = solve(s.model.lp, opt.solve);
    if (!s.result.optimal()) {
        throw SolveError(fmt::format("{} {}: solver returned {} after {} iterations", spec.state, stage,
                                     to_string(s.result.status), s.result.iterations));
    }
    return s;
}

SolveStats stats_of(const SolveResult& r) {
    return {r.backend, r.iterations, r.solve_time, r.max_primal_residual};
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ArgumentError("capacity grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw ArgumentError(fmt::format("grid capacity {} must be finite and > 0", grid[i]));
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw ArgumentError("capacity grid must be strictly increasing");
        }
    }
}

void add_diagnostics(ViabilityCurve& c) {
    const double slack = 1e-6 * std::max(1.0, std::abs(c.q_star));
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const ViabilityPoint& a = c.points[i - 1];
        const ViabilityPoint& b = c.points[i];
        if (b.avoided_cost < a.avoided_cost - slack) {
            c.diagnostics.push_back(fmt::format(
                "avoided cost decreases from {:.6g} at {:.6g} MW to {:.6g} at {:.6g} MW", a.avoided_cost,
                a.x_power_mw, b.avoided_cost, b.x_power_mw));
        }
    }
    for (const ViabilityPoint& p : c.points) {
        int n = p.dispatch.simultaneous_hours();
        if (n > 0) {
            c.diagnostics.push_back(
                fmt::format("{} storage-hours with simultaneous charge and discharge at {:.6g} MW", n,
                            p.x_power_mw));
        }
    }
}

}  // namespace

BaselineResult run_baseline(const SystemSpec& spec, const RunOptions& options) {
    Solved s = solve_model(spec, ModelMode::baseline(), options, "baseline");
    BaselineResult out;
    out.breakdown = breakdown(s.model, s.result.primal);
    out.q_star = out.breakdown.total;
    out.dispatch = extract_dispatch(s.model, s.result.primal);
    out.thermal_capacity_mw = spec.thermal_capacity_mw();
    out.stats = stats_of(s.result);
    return out;
}

ViabilityPoint viability_at(const SystemSpec& spec, double x_power_mw, double q_star,
                            const RunOptions& options) {
    if (!(x_power_mw > 0.0)) {
        throw ArgumentError(fmt::format("x_power_mw must be > 0, got {}", x_power_mw));
    }
    ModelMode mode = ModelMode::opportunity(x_power_mw, q_star, options.form);
    Solved s = solve_model(spec, mode, options, fmt::format("opportunity at {:g} MW", x_power_mw));
    ViabilityPoint p;
    p.x_power_mw = x_power_mw;
    p.breakdown = breakdown(s.model, s.result.primal);
    p.opportunity_cost = p.breakdown.system_cost();
    p.avoided_cost = q_star - p.opportunity_cost;
    p.q_over = std::max(0.0, -p.avoided_cost);
    const double c_vc = options.form == OpportunityForm::viability
                            ? s.result.primal[s.model.layout.c_vc]
                            : p.avoided_cost / x_power_mw;
    p.c_vc_per_kw = c_vc / 1000.0;
    p.dispatch = extract_dispatch(s.model, s.result.primal);
    p.stats = stats_of(s.result);
    return p;
}

ViabilityPoint run_without_ldes(const SystemSpec& spec, double q_star, const RunOptions& options) {
    ModelMode mode = ModelMode::opportunity(0.0, q_star, OpportunityForm::replacement);
    Solved s = solve_model(spec, mode, options, "opportunity without LDES");
    ViabilityPoint p;
    p.breakdown = breakdown(s.model, s.result.primal);
    p.opportunity_cost = p.breakdown.system_cost();
    p.avoided_cost = q_star - p.opportunity_cost;
    p.q_over = std::max(0.0, -p.avoided_cost);
    p.dispatch = extract_dispatch(s.model, s.result.primal);
    p.stats = stats_of(s.result);
    return p;
}

ViabilityCurve sweep_curve(const SystemSpec& spec, const std::vector<double>& grid, double q_star,
                           const RunOptions& options) {
    check_grid(grid);
    const std::size_t n = grid.size();
    std::vector<std::optional<ViabilityPoint>> points(n);
    std::vector<std::string> errors(n);
    std::vector<std::exception_ptr> fatal(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                points[i] = viability_at(spec, grid[i], q_star, options);
            } catch (const SolveError& e) {
                errors[i] = e.what();
            } catch (...) {
                fatal[i] = std::current_exception();
            }
        }
    };
    const int jobs = std::clamp<int>(options.jobs, 1, static_cast<int>(n));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& f : fatal) {
        if (f) std::rethrow_exception(f);
    }

    ViabilityCurve curve;
    curve.state = spec.state;
    curve.q_star = q_star;
    for (std::size_t i = 0; i < n; ++i) {
        if (points[i]) curve.points.push_back(std::move(*points[i]));
        else curve.failures.push_back({grid[i], errors[i]});
    }
    add_diagnostics(curve);
    return curve;
}

ViabilityCurve sweep_refined(const SystemSpec& spec, const std::vector<double>& grid, int refine,
                             double q_star, const RunOptions& options) {
    ViabilityCurve curve = sweep_curve(spec, grid, q_star, options);
    if (refine <= 0 || curve.points.empty()) return curve;
    std::vector<double> extra = refinement_grid(curve, refine);
    if (extra.empty()) return curve;
    ViabilityCurve more = sweep_curve(spec, extra, q_star, options);
    for (auto& p : more.points) curve.points.push_back(std::move(p));
    for (auto& f : more.failures) curve.failures.push_back(std::move(f));
    std::sort(curve.points.begin(), curve.points.end(),
              [](const auto& a, const auto& b) { return a.x_power_mw < b.x_power_mw; });
    std::sort(curve.failures.begin(), curve.failures.end(),
              [](const auto& a, const auto& b) { return a.x_power_mw < b.x_power_mw; });
    curve.diagnostics.clear();
    add_diagnostics(curve);
    return curve;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || n < 1 || !(hi > lo || (n == 1 && hi == lo))) {
        throw ArgumentError(fmt::format("log grid needs 0 < lo < hi and n >= 1 (got {}, {}, {})", lo, hi, n));
    }
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> refinement_grid(const ViabilityCurve& curve, int n) {
    const auto& pts = curve.points;
    if (pts.size() < 2 || n <= 0) return {};
    const ViabilityPoint& best = best_point(curve);
    std::size_t k = static_cast<std::size_t>(&best - pts.data());
    const double lo = k > 0 ? pts[k - 1].x_power_mw : pts[0].x_power_mw * pts[0].x_power_mw / pts[1].x_power_mw;
    const double hi = k + 1 < pts.size() ? pts[k + 1].x_power_mw : pts[k].x_power_mw;
    std::vector<double> out;
    const double step = std::log(hi / lo) / (n + 1);
    for (int i = 1; i <= n; ++i) {
        const double x = lo * std::exp(step * i);
        bool taken = false;
        for (const auto& p : pts) {
            if (std::abs(p.x_power_mw - x) <= 1e-9 * x) taken = true;
        }
        if (!taken && x < hi) out.push_back(x);
    }
    return out;
}

const ViabilityPoint& best_point(const ViabilityCurve& curve) {
    if (curve.points.empty()) throw ArgumentError("viability curve is empty");
    const ViabilityPoint* best = &curve.points.front();
    for (const auto& p : curve.points) {
        if (p.c_vc_per_kw > best->c_vc_per_kw ||
            (p.c_vc_per_kw == best->c_vc_per_kw && p.x_power_mw < best->x_power_mw)) {
            best = &p;
        }
    }
    return *best;
}

MaxViability max_viability(const ViabilityCurve& curve) {
    const ViabilityPoint& p = best_point(curve);
    return {p.c_vc_per_kw, p.x_power_mw, p.c_vc_per_kw >= 0.0};
}

MinViable min_viable_capacity(const ViabilityCurve& curve) {
    MinViable out;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (curve.points[i].avoided_cost >= 0.0) {
            out.x_mw = curve.points[i].x_power_mw;
            if (i > 0) out.bracket = std::make_pair(curve.points[i - 1].x_power_mw, curve.points[i].x_power_mw);
            break;
        }
    }
    return out;
}

std::optional<double> alpha_ratio(double x_at_max_mw, double thermal_capacity_mw) {
    if (!(thermal_capacity_mw > 0.0)) return std::nullopt;
    return x_at_max_mw / thermal_capacity_mw;
}

}  // namespace ldes
