// Dense bounded-variable primal simplex on the tableau of [A -I] with one
// logical column per row (a_i x - r_i = 0, bounds on r_i from the row sense).
// Composite pricing: the sum of bound violations of basic variables is
// minimized first, the true objective once the basis is primal feasible.

#include "backends.hpp"

#include "ldes/error.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <vector>

namespace ldes::detail {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class State : unsigned char { basic, at_lower, at_upper, free_zero };

constexpr double kPivotTol = 1e-9;
constexpr int kRefactorEvery = 100;
constexpr int kDegenerateLimit = 50;
constexpr std::size_t kMaxCells = 40'000'000;

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {
        n_ = lp.num_variables();
        m_ = lp.num_constraints();
        N_ = n_ + m_;
        if (static_cast<std::size_t>(m_) * static_cast<std::size_t>(N_) > kMaxCells) {
            throw ArgumentError(fmt::format(
                "simplex backend is dense; {} rows x {} columns is too large", m_, N_));
        }
        const double sign = lp.sense == ObjectiveSense::maximize ? -1.0 : 1.0;
        A_ = Eigen::MatrixXd::Zero(m_, N_);
        lo_.resize(N_);
        up_.resize(N_);
        cost_.assign(N_, 0.0);
        double scale = 1.0;
        for (int j = 0; j < n_; ++j) {
            const Variable& v = lp.variable(j);
            lo_[j] = v.lower;
            up_[j] = v.upper;
            cost_[j] = sign * v.objective;
            cmax_ = std::max(cmax_, std::abs(cost_[j]));
            if (std::isfinite(v.lower)) scale = std::max(scale, std::abs(v.lower));
            if (std::isfinite(v.upper)) scale = std::max(scale, std::abs(v.upper));
        }
        for (int i = 0; i < m_; ++i) {
            const Constraint& c = lp.constraints()[i];
            for (auto [j, a] : c.coefficients) A_(i, j) += a;
            A_(i, n_ + i) = -1.0;
            const int k = n_ + i;
            lo_[k] = c.sense == RowSense::less_equal ? -kInf : c.rhs;
            up_[k] = c.sense == RowSense::greater_equal ? kInf : c.rhs;
            scale = std::max(scale, std::abs(c.rhs));
        }
        ftol_ = opt.tol.feasibility * scale;
        dtol_ = opt.tol.optimality * std::max(1.0, cmax_);
    }

    SolveResult run() {
        SolveResult result;
        const auto start = std::chrono::steady_clock::now();
        const int max_iter = opt_.limits.iterations > 0 ? opt_.limits.iterations : 50 * (N_ + 1) + 10000;

        x_.assign(N_, 0.0);
        state_.assign(N_, State::at_lower);
        for (int j = 0; j < n_; ++j) {
            if (std::isfinite(lo_[j])) {
                x_[j] = lo_[j];
                state_[j] = State::at_lower;
            } else if (std::isfinite(up_[j])) {
                x_[j] = up_[j];
                state_[j] = State::at_upper;
            } else {
                state_[j] = State::free_zero;
            }
        }
        head_.resize(m_);
        for (int i = 0; i < m_; ++i) {
            head_[i] = n_ + i;
            state_[n_ + i] = State::basic;
        }
        refactor();

        int degenerate = 0;
        int since_refactor = 0;
        bool converged = false;
        for (int iter = 0; iter < max_iter; ++iter) {
            result.iterations = iter;
            if (opt_.limits.seconds > 0.0 &&
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
                    opt_.limits.seconds) {
                return result;
            }
            if (since_refactor >= kRefactorEvery) {
                refactor();
                since_refactor = 0;
            }
            const bool phase_one = infeasibility() > 0.0;
            std::vector<double> cb(m_);
            for (int i = 0; i < m_; ++i) {
                const int k = head_[i];
                if (phase_one) {
                    cb[i] = x_[k] < lo_[k] - tol_at(lo_[k]) ? -1.0
                            : x_[k] > up_[k] + tol_at(up_[k]) ? 1.0
                                                              : 0.0;
                } else {
                    cb[i] = cost_[k];
                }
            }
            Eigen::Map<const Eigen::VectorXd> cbv(cb.data(), m_);
            Eigen::VectorXd d = -(T_.transpose() * cbv);
            if (!phase_one) {
                for (int j = 0; j < N_; ++j) d[j] += cost_[j];
            }
            const double tol = phase_one ? 1e-11 : dtol_;

            int enter = -1;
            double dir = 0.0;
            double best = 0.0;
            const bool bland = degenerate > kDegenerateLimit;
            for (int j = 0; j < N_; ++j) {
                const State s = state_[j];
                if (s == State::basic || lo_[j] == up_[j]) continue;
                double score = 0.0;
                double dj = 0.0;
                if (d[j] < -tol && s != State::at_upper) {
                    score = -d[j];
                    dj = 1.0;
                } else if (d[j] > tol && s != State::at_lower) {
                    score = d[j];
                    dj = -1.0;
                } else {
                    continue;
                }
                if (bland) {
                    enter = j;
                    dir = dj;
                    break;
                }
                if (score > best) {
                    best = score;
                    enter = j;
                    dir = dj;
                }
            }
            if (enter < 0) {
                if (phase_one) {
                    result.status = SolveStatus::infeasible;
                    return result;
                }
                converged = true;
                break;
            }

            // Ratio test, stopping at the first breakpoint.
            double theta = up_[enter] - lo_[enter];
            if (!std::isfinite(theta)) theta = kInf;
            int leave = -1;
            double leave_alpha = 0.0;
            double leave_value = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double alpha = dir * T_(i, enter);
                if (std::abs(alpha) <= kPivotTol) continue;
                const int k = head_[i];
                double limit = kInf;
                double target = 0.0;
                if (alpha > 0.0) {
                    if (x_[k] > up_[k] + tol_at(up_[k])) target = up_[k];
                    else if (std::isfinite(lo_[k]) && x_[k] >= lo_[k] - tol_at(lo_[k])) target = lo_[k];
                    else continue;
                    limit = (x_[k] - target) / alpha;
                } else {
                    if (x_[k] < lo_[k] - tol_at(lo_[k])) target = lo_[k];
                    else if (std::isfinite(up_[k]) && x_[k] <= up_[k] + tol_at(up_[k])) target = up_[k];
                    else continue;
                    limit = (target - x_[k]) / -alpha;
                }
                limit = std::max(limit, 0.0);
                if (limit < theta - 1e-12 ||
                    (limit <= theta + 1e-12 && leave >= 0 && std::abs(alpha) > std::abs(leave_alpha))) {
                    theta = std::min(theta, limit);
                    leave = i;
                    leave_alpha = alpha;
                    leave_value = target;
                }
            }
            if (!std::isfinite(theta)) {
                if (phase_one) return result;
                result.status = SolveStatus::unbounded;
                return result;
            }
            degenerate = theta <= 1e-12 ? degenerate + 1 : 0;

            for (int i = 0; i < m_; ++i) x_[head_[i]] -= theta * dir * T_(i, enter);
            x_[enter] += theta * dir;
            if (leave < 0) {
                // Bound flip of the entering column.
                state_[enter] = dir > 0 ? State::at_upper : State::at_lower;
                x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
                continue;
            }
            const int k = head_[leave];
            x_[k] = leave_value;
            state_[k] = leave_value == lo_[k] ? State::at_lower : State::at_upper;
            state_[enter] = State::basic;
            head_[leave] = enter;
            pivot(leave, enter);
            ++since_refactor;
        }
        if (!converged) return result;

        refactor();
        if (infeasibility() > 0.0) return result;
        result.status = SolveStatus::optimal;
        result.primal.assign(x_.begin(), x_.begin() + n_);
        for (int j = 0; j < n_; ++j) {
            result.primal[j] = std::clamp(result.primal[j], lo_[j], up_[j]);
        }
        return result;
    }

private:
    double tol_at(double bound) const {
        return std::isfinite(bound) ? std::max(ftol_, opt_.tol.feasibility * std::abs(bound)) : 0.0;
    }

    double infeasibility() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i) {
            const int k = head_[i];
            if (x_[k] < lo_[k] - tol_at(lo_[k])) s += lo_[k] - x_[k];
            if (x_[k] > up_[k] + tol_at(up_[k])) s += x_[k] - up_[k];
        }
        return s;
    }

    void pivot(int r, int j) {
        const double p = T_(r, j);
        T_.row(r) /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = T_(i, j);
            if (f != 0.0) T_.row(i) -= f * T_.row(r);
        }
    }

    // Rebuilds the tableau and the basic values from the basis with an LU
    // factorization of B.
    void refactor() {
        if (m_ == 0) {
            T_.resize(0, N_);
            return;
        }
        Eigen::MatrixXd B(m_, m_);
        for (int i = 0; i < m_; ++i) B.col(i) = A_.col(head_[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
        T_ = lu.solve(A_);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (int j = 0; j < N_; ++j) {
            if (state_[j] != State::basic && x_[j] != 0.0) rhs -= A_.col(j) * x_[j];
        }
        Eigen::VectorXd xb = lu.solve(rhs);
        for (int i = 0; i < m_; ++i) x_[head_[i]] = xb[i];
    }

    const LinearProgram& lp_;
    const SolveOptions& opt_;
    int n_ = 0;
    int m_ = 0;
    int N_ = 0;
    Eigen::MatrixXd A_;
    Tableau T_;
    std::vector<double> lo_, up_, cost_, x_;
    std::vector<State> state_;
    std::vector<int> head_;
    double cmax_ = 0.0;
    double ftol_ = 1e-9;
    double dtol_ = 1e-9;
};

}  // namespace

SolveResult solve_simplex(const LinearProgram& lp, const SolveOptions& options) {
    Simplex s(lp, options);
    return s.run();
}

}  // namespace ldes::detail
