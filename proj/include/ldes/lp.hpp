#pragma once

#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ldes {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { less_equal, equal, greater_equal };
enum class ObjectiveSense { minimize, maximize };

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    double objective = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> coefficients;  // (variable index, value)
    RowSense sense = RowSense::less_equal;
    double rhs = 0.0;
};

// Sparse linear program: optimize objective_offset + sum_j c_j x_j subject to
// per-row senses and per-column bounds.
class LinearProgram {
public:
    ObjectiveSense sense = ObjectiveSense::minimize;
    double objective_offset = 0.0;

    int add_variable(std::string name, double lower, double upper, double objective = 0.0);
    int add_constraint(std::string name, std::vector<std::pair<int, double>> coefficients,
                       RowSense sense, double rhs);

    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    Variable& variable(int j) { return variables_[j]; }
    const Variable& variable(int j) const { return variables_[j]; }
    Constraint& constraint(int i) { return constraints_[i]; }

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }
    std::size_t num_nonzeros() const;

    // -1 when absent.
    int find_variable(const std::string& name) const;
    int find_constraint(const std::string& name) const;

    // Objective value of a full primal vector, offset included.
    double evaluate(const std::vector<double>& x) const;

    // Throws ArgumentError on dangling indices, inverted bounds, non-finite
    // coefficients or duplicate names.
    void validate() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::unordered_map<std::string, int> variable_index_;
    std::unordered_map<std::string, int> constraint_index_;
};

}  // namespace ldes
