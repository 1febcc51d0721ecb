#include "ldes/solver.hpp"

#include "backends.hpp"
#include "ldes/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>

namespace ldes {

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

std::string_view to_string(Backend b) {
    return b == Backend::interior_point ? "interior_point" : "simplex";
}

std::optional<Backend> parse_backend(std::string_view s) {
    if (s == "interior_point" || s == "ipm") return Backend::interior_point;
    if (s == "simplex") return Backend::simplex;
    return std::nullopt;
}

double SolveResult::value(const LinearProgram& lp, const std::string& name) const {
    int j = lp.find_variable(name);
    if (j < 0) throw ArgumentError(fmt::format("unknown variable '{}'", name));
    if (primal.empty()) throw StateError("no primal solution available");
    return primal[j];
}

std::map<std::string, double> SolveResult::primal_by_name(const LinearProgram& lp) const {
    std::map<std::string, double> out;
    for (std::size_t j = 0; j < primal.size(); ++j) out[lp.variable(static_cast<int>(j)).name] = primal[j];
    return out;
}

SolveResult solve(const LinearProgram& lp, const SolveOptions& options) {
    lp.validate();
    if (!(options.tol.feasibility > 0.0) || !(options.tol.optimality > 0.0)) {
        throw ArgumentError("solver tolerances must be > 0");
    }
    auto t0 = std::chrono::steady_clock::now();
    SolveResult r = options.backend == Backend::interior_point
                        ? detail::solve_interior_point(lp, options)
                        : detail::solve_simplex(lp, options);
    r.backend = options.backend;
    if (r.optimal()) {
        Residuals res = verify(lp, r.primal);
        r.max_primal_residual = std::max(res.max_constraint_residual, res.max_bound_violation);
        r.objective = lp.evaluate(r.primal);
    } else {
        r.primal.clear();
    }
    r.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Residuals verify(const LinearProgram& lp, const std::vector<double>& primal) {
    if (static_cast<int>(primal.size()) != lp.num_variables()) {
        throw ArgumentError(fmt::format("primal has {} values, LP has {} variables", primal.size(),
                                        lp.num_variables()));
    }
    Residuals r;
    for (int j = 0; j < lp.num_variables(); ++j) {
        const Variable& v = lp.variable(j);
        double x = primal[j];
        if (std::isnan(x)) throw ArgumentError(fmt::format("primal value for '{}' is NaN", v.name));
        r.max_bound_violation = std::max({r.max_bound_violation, v.lower - x, x - v.upper});
    }
    for (int i = 0; i < lp.num_constraints(); ++i) {
        const Constraint& c = lp.constraints()[i];
        double lhs = 0.0;
        for (auto [j, a] : c.coefficients) lhs += a * primal[j];
        double viol = 0.0;
        switch (c.sense) {
            case RowSense::less_equal: viol = lhs - c.rhs; break;
            case RowSense::greater_equal: viol = c.rhs - lhs; break;
            case RowSense::equal: viol = std::abs(lhs - c.rhs); break;
        }
        if (viol > r.max_constraint_residual) {
            r.max_constraint_residual = viol;
            r.worst_constraint = i;
        }
    }
    return r;
}

Residuals verify(const LinearProgram& lp, const std::map<std::string, double>& primal) {
    std::vector<double> x(lp.num_variables());
    for (int j = 0; j < lp.num_variables(); ++j) {
        auto it = primal.find(lp.variable(j).name);
        if (it == primal.end()) {
            throw ArgumentError(fmt::format("primal misses variable '{}'", lp.variable(j).name));
        }
        x[j] = it->second;
    }
    return verify(lp, x);
}

}  // namespace ldes
