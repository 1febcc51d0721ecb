#include "ldes/lp.hpp"

#include "ldes/error.hpp"

#include <cmath>
#include <fmt/format.h>

namespace ldes {

int LinearProgram::add_variable(std::string name, double lower, double upper, double objective) {
    const int j = num_variables();
    if (!variable_index_.emplace(name, j).second) {
        throw ArgumentError(fmt::format("duplicate variable name '{}'", name));
    }
    variables_.push_back({std::move(name), lower, upper, objective});
    return j;
}

int LinearProgram::add_constraint(std::string name, std::vector<std::pair<int, double>> coefficients,
                                  RowSense sense, double rhs) {
    const int i = num_constraints();
    if (!constraint_index_.emplace(name, i).second) {
        throw ArgumentError(fmt::format("duplicate constraint name '{}'", name));
    }
    constraints_.push_back({std::move(name), std::move(coefficients), sense, rhs});
    return i;
}

std::size_t LinearProgram::num_nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : constraints_) n += c.coefficients.size();
    return n;
}

int LinearProgram::find_variable(const std::string& name) const {
    auto it = variable_index_.find(name);
    return it == variable_index_.end() ? -1 : it->second;
}

int LinearProgram::find_constraint(const std::string& name) const {
    auto it = constraint_index_.find(name);
    return it == constraint_index_.end() ? -1 : it->second;
}

double LinearProgram::evaluate(const std::vector<double>& x) const {
    double v = objective_offset;
    for (int j = 0; j < num_variables(); ++j) v += variables_[j].objective * x[j];
    return v;
}

void LinearProgram::validate() const {
    const int n = num_variables();
    for (const auto& v : variables_) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
            v.lower == kInf || v.upper == -kInf) {
            throw ArgumentError(fmt::format("variable '{}': invalid bounds [{}, {}]", v.name,
                                            v.lower, v.upper));
        }
        if (!std::isfinite(v.objective)) {
            throw ArgumentError(fmt::format("variable '{}': non-finite objective", v.name));
        }
    }
    for (const auto& c : constraints_) {
        if (!std::isfinite(c.rhs)) {
            throw ArgumentError(fmt::format("constraint '{}': non-finite rhs", c.name));
        }
        for (auto [j, a] : c.coefficients) {
            if (j < 0 || j >= n) {
                throw ArgumentError(fmt::format("constraint '{}': variable index {} out of range",
                                                c.name, j));
            }
            if (!std::isfinite(a)) {
                throw ArgumentError(fmt::format("constraint '{}': non-finite coefficient", c.name));
            }
        }
    }
    if (!std::isfinite(objective_offset)) throw ArgumentError("non-finite objective offset");
}

}  // namespace ldes
