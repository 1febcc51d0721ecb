#pragma once

#include "ldes/lp.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldes {

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

std::string_view to_string(SolveStatus s);

// Two independent algorithms behind one contract:
//  - interior_point: sparse primal-dual predictor-corrector (the reference
//    backend; scales to week-long hourly horizons),
//  - simplex: dense bounded-variable two-phase primal simplex, used as the
//    cross-check on small instances.
enum class Backend { interior_point, simplex };

std::string_view to_string(Backend b);
std::optional<Backend> parse_backend(std::string_view s);

struct Tolerances {
    double feasibility = 1e-9;
    double optimality = 1e-9;
};

struct Limits {
    int iterations = 0;        // 0 = backend default
    double seconds = 0.0;      // 0 = unlimited
};

struct SolveOptions {
    Backend backend = Backend::interior_point;
    Tolerances tol;
    Limits limits;
};

struct SolveResult {
    SolveStatus status = SolveStatus::iteration_limit;
    Backend backend = Backend::interior_point;
    // In the LP's own sense, offset included.
    double objective = 0.0;
    // Indexed like lp.variables(); empty unless status is optimal.
    std::vector<double> primal;
    double max_primal_residual = 0.0;
    double solve_time = 0.0;
    int iterations = 0;

    bool optimal() const { return status == SolveStatus::optimal; }
    double value(const LinearProgram& lp, const std::string& name) const;
    std::map<std::string, double> primal_by_name(const LinearProgram& lp) const;
};

SolveResult solve(const LinearProgram& lp, const SolveOptions& options = {});

struct Residuals {
    double max_constraint_residual = 0.0;  // worst row violation, absolute
    double max_bound_violation = 0.0;      // worst column bound violation, absolute
    int worst_constraint = -1;
};

// Straight row-by-row evaluation, independent of any backend. Throws
// ArgumentError if primal does not cover every variable.
Residuals verify(const LinearProgram& lp, const std::vector<double>& primal);
Residuals verify(const LinearProgram& lp, const std::map<std::string, double>& primal);

}  // namespace ldes
