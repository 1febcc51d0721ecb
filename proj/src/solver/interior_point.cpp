// Sparse primal-dual interior point method (Mehrotra predictor-corrector)
// for min c'x s.t. Ax = b, 0 <= x, x_U <= u, solved through the normal
// equations A Theta A' dy = r with a sparse LDL' factorization.

#include "backends.hpp"

#include "ldes/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

namespace ldes::detail {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Entries = std::vector<std::pair<int, double>>;

double rel_tol(double v) { return 1e-9 * (1.0 + std::abs(v)); }

// ---------------------------------------------------------------------------
// Presolve: fixed columns, singleton rows turned into bounds, empty rows and
// empty columns. Only primal values are needed afterwards, so no dual
// postsolve is kept.

struct Presolved {
    bool infeasible = false;
    bool dual_infeasible = false;
    std::vector<Entries> rows;
    std::vector<Entries> cols;  // (row, coefficient)
    std::vector<RowSense> sense;
    std::vector<double> rhs, lower, upper, cost, value;
    std::vector<char> col_active, row_active;
    double offset = 0.0;  // minimization sense
};

Entries merged(const Entries& in) {
    Entries e = in;
    std::sort(e.begin(), e.end(), [](auto& a, auto& b) { return a.first < b.first; });
    Entries out;
    for (auto [j, a] : e) {
        if (!out.empty() && out.back().first == j) out.back().second += a;
        else out.emplace_back(j, a);
    }
    std::erase_if(out, [](auto& p) { return p.second == 0.0; });
    return out;
}

Presolved presolve(const LinearProgram& lp) {
    Presolved p;
    const int n = lp.num_variables();
    const int m = lp.num_constraints();
    const double sign = lp.sense == ObjectiveSense::maximize ? -1.0 : 1.0;
    p.offset = sign * lp.objective_offset;
    p.lower.resize(n);
    p.upper.resize(n);
    p.cost.resize(n);
    p.value.assign(n, 0.0);
    p.col_active.assign(n, 1);
    p.row_active.assign(m, 1);
    p.cols.resize(n);
    for (int j = 0; j < n; ++j) {
        const Variable& v = lp.variable(j);
        p.lower[j] = v.lower;
        p.upper[j] = v.upper;
        p.cost[j] = sign * v.objective;
    }
    for (int i = 0; i < m; ++i) {
        const Constraint& c = lp.constraints()[i];
        p.rows.push_back(merged(c.coefficients));
        p.sense.push_back(c.sense);
        p.rhs.push_back(c.rhs);
        for (auto [j, a] : p.rows.back()) p.cols[j].emplace_back(i, a);
    }

    auto fix = [&p](int j, double v) {
        p.value[j] = v;
        p.col_active[j] = 0;
        p.offset += p.cost[j] * v;
        for (auto [i, a] : p.cols[j]) {
            if (p.row_active[i]) p.rhs[i] -= a * v;
        }
    };

    bool changed = true;
    while (changed && !p.infeasible) {
        changed = false;
        for (int j = 0; j < n; ++j) {
            if (p.col_active[j] && p.lower[j] == p.upper[j]) {
                fix(j, p.lower[j]);
                changed = true;
            }
        }
        for (int i = 0; i < m && !p.infeasible; ++i) {
            if (!p.row_active[i]) continue;
            int count = 0;
            int col = -1;
            double coef = 0.0;
            for (auto [j, a] : p.rows[i]) {
                if (!p.col_active[j]) continue;
                ++count;
                col = j;
                coef = a;
            }
            if (count > 1) continue;
            const double b = p.rhs[i];
            if (count == 0) {
                bool ok = p.sense[i] == RowSense::less_equal      ? 0.0 <= b + rel_tol(b)
                          : p.sense[i] == RowSense::greater_equal ? 0.0 >= b - rel_tol(b)
                                                                  : std::abs(b) <= rel_tol(b);
                if (!ok) p.infeasible = true;
                p.row_active[i] = 0;
                changed = true;
                continue;
            }
            const double bound = b / coef;
            double& lo = p.lower[col];
            double& up = p.upper[col];
            if (p.sense[i] == RowSense::equal) {
                if (bound < lo - rel_tol(bound) || bound > up + rel_tol(bound)) {
                    p.infeasible = true;
                } else {
                    lo = up = std::clamp(bound, lo, up);
                }
            } else {
                const bool upper_side = (p.sense[i] == RowSense::less_equal) == (coef > 0.0);
                if (upper_side) up = std::min(up, bound);
                else lo = std::max(lo, bound);
                if (lo > up) {
                    if (lo - up <= rel_tol(lo)) {
                        if (upper_side) up = lo;
                        else lo = up;
                    } else {
                        p.infeasible = true;
                    }
                }
            }
            p.row_active[i] = 0;
            changed = true;
        }
        if (changed || p.infeasible) continue;
        for (int j = 0; j < n; ++j) {
            if (!p.col_active[j]) continue;
            bool empty = std::none_of(p.cols[j].begin(), p.cols[j].end(),
                                      [&](auto& e) { return p.row_active[e.first] != 0; });
            if (!empty) continue;
            const double c = p.cost[j];
            double v = std::clamp(0.0, p.lower[j], p.upper[j]);
            if (c > 0.0) {
                if (std::isfinite(p.lower[j])) v = p.lower[j];
                else p.dual_infeasible = true;
            } else if (c < 0.0) {
                if (std::isfinite(p.upper[j])) v = p.upper[j];
                else p.dual_infeasible = true;
            }
            fix(j, v);
            changed = true;
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Standard form: every active column becomes one or two nonnegative columns,
// inequality rows get slack columns.

enum class ColumnForm { shifted, mirrored, split };

struct ColumnMap {
    int original = -1;
    ColumnForm form = ColumnForm::shifted;
    int first = -1;  // standard-form column (x+ for split)
    int second = -1; // x- for split
};

struct StandardForm {
    SpMat A;
    Vec b, c, u;
    std::vector<char> has_upper;
    std::vector<std::pair<int, int>> free_pairs;
    double offset = 0.0;
    std::vector<ColumnMap> columns;
};

constexpr int kDenseColumn = 64;
constexpr std::size_t kChunk = 64;

StandardForm standardize(const Presolved& p) {
    StandardForm sf;
    const int n = static_cast<int>(p.lower.size());
    std::vector<int> row_map(p.rows.size(), -1);
    int m = 0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        if (p.row_active[i]) row_map[i] = m++;
    }
    std::vector<double> cost, upper;
    std::vector<char> has_upper;
    std::vector<int> col_of(n, -1);
    auto add_col = [&](double c, double u) {
        cost.push_back(c);
        upper.push_back(u);
        has_upper.push_back(std::isfinite(u) ? 1 : 0);
        return static_cast<int>(cost.size()) - 1;
    };
    sf.offset = p.offset;
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        if (row_map[i] >= 0) rhs[row_map[i]] = p.rhs[i];
    }
    for (int j = 0; j < n; ++j) {
        if (!p.col_active[j]) continue;
        ColumnMap cm;
        cm.original = j;
        const double lo = p.lower[j];
        const double up = p.upper[j];
        if (std::isfinite(lo)) {
            cm.form = ColumnForm::shifted;
            cm.first = add_col(p.cost[j], std::isfinite(up) ? up - lo : kInf);
            sf.offset += p.cost[j] * lo;
        } else if (std::isfinite(up)) {
            cm.form = ColumnForm::mirrored;
            cm.first = add_col(-p.cost[j], kInf);
            sf.offset += p.cost[j] * up;
        } else {
            cm.form = ColumnForm::split;
            cm.first = add_col(p.cost[j], kInf);
            cm.second = add_col(-p.cost[j], kInf);
            sf.free_pairs.emplace_back(cm.first, cm.second);
        }
        col_of[j] = static_cast<int>(sf.columns.size());
        sf.columns.push_back(cm);
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        const int r = row_map[i];
        if (r < 0) continue;
        for (auto [j, a] : p.rows[i]) {
            if (!p.col_active[j]) continue;
            const ColumnMap& cm = sf.columns[col_of[j]];
            switch (cm.form) {
                case ColumnForm::shifted:
                    trip.emplace_back(r, cm.first, a);
                    rhs[r] -= a * p.lower[j];
                    break;
                case ColumnForm::mirrored:
                    trip.emplace_back(r, cm.first, -a);
                    rhs[r] -= a * p.upper[j];
                    break;
                case ColumnForm::split:
                    trip.emplace_back(r, cm.first, a);
                    trip.emplace_back(r, cm.second, -a);
                    break;
            }
        }
        if (p.sense[i] != RowSense::equal) {
            int s = add_col(0.0, kInf);
            trip.emplace_back(r, s, p.sense[i] == RowSense::less_equal ? 1.0 : -1.0);
        }
    }
    // Columns touching many rows (capacity variables shared by every hour)
    // would make A Theta A' dense. Each is cut into chained copies tied by
    // x_k - x_k' = 0 rows.
    {
        std::vector<std::vector<std::size_t>> by_col(cost.size());
        for (std::size_t t = 0; t < trip.size(); ++t) by_col[trip[t].col()].push_back(t);
        for (std::size_t k = 0; k < by_col.size(); ++k) {
            const auto& ts = by_col[k];
            if (static_cast<int>(ts.size()) <= kDenseColumn) continue;
            int prev = static_cast<int>(k);
            for (std::size_t at = kChunk; at < ts.size(); at += kChunk) {
                const int copy = add_col(0.0, kInf);
                for (std::size_t q = at; q < std::min(ts.size(), at + kChunk); ++q) {
                    const auto& e = trip[ts[q]];
                    trip[ts[q]] = Eigen::Triplet<double>(e.row(), copy, e.value());
                }
                trip.emplace_back(m, prev, 1.0);
                trip.emplace_back(m, copy, -1.0);
                rhs.push_back(0.0);
                ++m;
                prev = copy;
            }
        }
    }
    const int ns = static_cast<int>(cost.size());
    sf.A.resize(m, ns);
    sf.A.setFromTriplets(trip.begin(), trip.end());
    sf.A.makeCompressed();
    sf.b = Eigen::Map<Vec>(rhs.data(), m);
    sf.c = Eigen::Map<Vec>(cost.data(), ns);
    sf.u = Eigen::Map<Vec>(upper.data(), ns);
    sf.has_upper = std::move(has_upper);
    return sf;
}

// ---------------------------------------------------------------------------
// Ruiz equilibration (every row and column max brought to 1) followed by a
// global normalization of the right-hand side and the cost vector.

struct Scaling {
    Vec row, col;
    double b_scale = 1.0;
    double c_scale = 1.0;
};

Scaling scale_in_place(StandardForm& sf) {
    SpMat& A = sf.A;
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    Scaling s;
    s.row = Vec::Ones(m);
    s.col = Vec::Ones(n);
    for (int pass = 0; pass < 20; ++pass) {
        Vec rmax = Vec::Zero(m);
        Vec cmax = Vec::Zero(n);
        for (int k = 0; k < A.outerSize(); ++k) {
            for (SpMat::InnerIterator it(A, k); it; ++it) {
                const double a = std::abs(it.value());
                rmax[it.row()] = std::max(rmax[it.row()], a);
                cmax[k] = std::max(cmax[k], a);
            }
        }
        double spread = 0.0;
        Vec rs(m), cs(n);
        for (int i = 0; i < m; ++i) {
            rs[i] = rmax[i] > 0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
            if (rmax[i] > 0) spread = std::max(spread, std::abs(1.0 - rmax[i]));
        }
        for (int k = 0; k < n; ++k) {
            cs[k] = cmax[k] > 0 ? 1.0 / std::sqrt(cmax[k]) : 1.0;
            if (cmax[k] > 0) spread = std::max(spread, std::abs(1.0 - cmax[k]));
        }
        if (spread < 1e-3) break;
        A = rs.asDiagonal() * A * cs.asDiagonal();
        s.row = s.row.cwiseProduct(rs);
        s.col = s.col.cwiseProduct(cs);
    }
    A.makeCompressed();
    sf.b = s.row.cwiseProduct(sf.b);
    sf.c = s.col.cwiseProduct(sf.c);
    for (int k = 0; k < n; ++k) {
        if (sf.has_upper[k]) sf.u[k] /= s.col[k];
    }
    double bmax = sf.b.size() ? sf.b.lpNorm<Eigen::Infinity>() : 0.0;
    for (int k = 0; k < n; ++k) {
        if (sf.has_upper[k]) bmax = std::max(bmax, std::abs(sf.u[k]));
    }
    s.b_scale = std::max(1.0, bmax);
    s.c_scale = std::max(1.0, sf.c.size() ? sf.c.lpNorm<Eigen::Infinity>() : 0.0);
    sf.b /= s.b_scale;
    for (int k = 0; k < n; ++k) {
        if (sf.has_upper[k]) sf.u[k] /= s.b_scale;
    }
    sf.c /= s.c_scale;
    return s;
}

// ---------------------------------------------------------------------------

struct IpmOutcome {
    SolveStatus status = SolveStatus::iteration_limit;
    Vec x;
    int iterations = 0;
};

double step_to_boundary(const Vec& v, const Vec& dv, const std::vector<char>* mask = nullptr) {
    double a = 1.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (mask && !(*mask)[k]) continue;
        if (dv[k] < 0.0) a = std::min(a, -v[k] / dv[k]);
    }
    return a;
}

// Newton systems reduced to the normal equations A Theta A' dy = r with
// Theta = D^-1, factored by a sparse LDL' with a small relative diagonal shift.
class NormalEquations {
public:
    explicit NormalEquations(const SpMat& A) : A_(A), At_(A.transpose()) {}

    bool factor(const Vec& d) {
        theta_ = d.cwiseInverse();
        Vec sq = theta_.cwiseSqrt();
        SpMat AD = A_ * sq.asDiagonal();
        M0_ = AD * AD.transpose();
        Vec shift(M0_.rows());
        for (int i = 0; i < M0_.rows(); ++i) shift[i] = 1e-12 * M0_.coeff(i, i) + 1e-14;
        SpMat S(M0_.rows(), M0_.cols());
        S.setIdentity();
        M_ = M0_ + shift.asDiagonal() * S;
        if (!analyzed_) {
            ldlt_.analyzePattern(M_);
            analyzed_ = true;
        }
        ldlt_.factorize(M_);
        return ldlt_.info() == Eigen::Success;
    }

    // Solves [-D A'; A 0] [dx; dy] = [rhat; rp]. Refinement runs against the
    // unshifted matrix while it keeps converging.
    std::pair<Vec, Vec> solve(const Vec& rhat, const Vec& rp) const {
        Vec r = rp + A_ * theta_.cwiseProduct(rhat);
        const double target = 1e-15 * (1.0 + r.lpNorm<Eigen::Infinity>());
        Vec dy = ldlt_.solve(r);
        double last = kInf;
        for (int k = 0; k < 20; ++k) {
            Vec res = r - M0_ * dy;
            const double norm = res.lpNorm<Eigen::Infinity>();
            if (!(norm < 0.5 * last) || norm <= target) break;
            last = norm;
            dy += ldlt_.solve(res);
        }
        Vec dx = theta_.cwiseProduct(At_ * dy - rhat);
        return {dx, dy};
    }

    const SpMat& At() const { return At_; }

private:
    const SpMat& A_;
    SpMat At_;
    SpMat M_;
    SpMat M0_;
    Vec theta_;
    bool analyzed_ = false;
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
};

struct Direction {
    Vec dx, dw, dy, dz, dv;
};

// obj_scale converts scaled objective values back to the caller's units; the
// duality gap is judged there.
IpmOutcome run_ipm(const StandardForm& sf, const SolveOptions& opt,
                   std::chrono::steady_clock::time_point start, double obj_scale) {
    const SpMat& A = sf.A;
    const Vec& b = sf.b;
    const Vec& c = sf.c;
    const Vec& u = sf.u;
    const int n = static_cast<int>(A.cols());
    const std::vector<char>& hu = sf.has_upper;
    Vec umask(n);
    int nu = 0;
    for (int k = 0; k < n; ++k) {
        umask[k] = hu[k] ? 1.0 : 0.0;
        nu += hu[k];
    }
    Vec ufin = u.cwiseProduct(umask);
    for (int k = 0; k < n; ++k) {
        if (!hu[k]) ufin[k] = 0.0;
    }

    const int max_iter = opt.limits.iterations > 0 ? opt.limits.iterations : 300;
    const double tol_p = std::min(opt.tol.feasibility, 1e-8) * 0.1;
    const double tol_d = std::min(opt.tol.optimality, 1e-8) * 0.1;
    const double norm_b = std::max(b.size() ? b.lpNorm<Eigen::Infinity>() : 0.0,
                                   ufin.size() ? ufin.lpNorm<Eigen::Infinity>() : 0.0);
    const double norm_c = c.size() ? c.lpNorm<Eigen::Infinity>() : 0.0;

    NormalEquations ne(A);
    IpmOutcome out;

    // Mehrotra's starting point: least-squares solutions of the primal and
    // dual equality systems, shifted into the interior and balanced.
    if (!ne.factor(Vec::Ones(n))) return out;
    Vec x = ne.solve(Vec::Zero(n), b).first;
    auto [mz, y] = ne.solve(c, Vec::Zero(b.size()));
    Vec z = -mz;
    x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
    z.array() += std::max(-1.5 * z.minCoeff(), 0.0);
    x.array() += 1e-3;
    z.array() += 1e-3;
    const double xz0 = x.dot(z);
    x.array() += 0.5 * xz0 / z.sum();
    z.array() += 0.5 * xz0 / x.sum();
    Vec w = Vec::Zero(n);
    Vec v = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
        if (!hu[k]) continue;
        const double room = std::max(u[k], 1e-8);
        if (x[k] >= 0.5 * room) x[k] = 0.5 * room;
        w[k] = std::max(u[k] - x[k], 0.5 * room);
        v[k] = z[k];
    }

    auto solve_newton = [&](const Vec& rp, const Vec& ru, const Vec& rd, const Vec& rxz,
                            const Vec& rwv) {
        Direction d;
        Vec rhat = rd - rxz.cwiseQuotient(x);
        for (int k = 0; k < n; ++k) {
            if (hu[k]) rhat[k] += (rwv[k] - v[k] * ru[k]) / w[k];
        }
        std::tie(d.dx, d.dy) = ne.solve(rhat, rp);
        d.dz = (rxz - z.cwiseProduct(d.dx)).cwiseQuotient(x);
        d.dw = Vec::Zero(n);
        d.dv = Vec::Zero(n);
        for (int k = 0; k < n; ++k) {
            if (!hu[k]) continue;
            d.dw[k] = ru[k] - d.dx[k];
            d.dv[k] = (rwv[k] - v[k] * d.dw[k]) / w[k];
        }
        return d;
    };

    double sigma_min = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter;
        if (opt.limits.seconds > 0.0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
                opt.limits.seconds) {
            return out;
        }
        Vec rp = b - A * x;
        Vec ru = (u - x - w).cwiseProduct(umask);
        for (int k = 0; k < n; ++k) {
            if (!hu[k]) ru[k] = 0.0;
        }
        Vec rd = c - ne.At() * y - z + v;
        const double xz = x.dot(z) + w.cwiseProduct(v).cwiseProduct(umask).sum();
        const double mu = xz / std::max(1, n + nu);
        const double pobj = c.dot(x);
        const double dobj = b.dot(y) - ufin.dot(v);
        const double pinf = std::max(rp.size() ? rp.lpNorm<Eigen::Infinity>() : 0.0,
                                     ru.size() ? ru.lpNorm<Eigen::Infinity>() : 0.0) /
                            (1.0 + norm_b);
        const double dinf = (rd.size() ? rd.lpNorm<Eigen::Infinity>() : 0.0) / (1.0 + norm_c);
        const double gap = obj_scale * std::abs(pobj - dobj) / (1.0 + obj_scale * std::abs(pobj));
        if (pinf <= tol_p && dinf <= tol_d && gap <= tol_d) {
            out.status = SolveStatus::optimal;
            out.x = x;
            return out;
        }

        // Diverging iterates; the caller diagnoses the problem separately.
        const double xnorm = std::max(x.lpNorm<Eigen::Infinity>(), w.lpNorm<Eigen::Infinity>());
        const double ynorm = std::max({y.size() ? y.lpNorm<Eigen::Infinity>() : 0.0,
                                       z.lpNorm<Eigen::Infinity>(), v.lpNorm<Eigen::Infinity>()});
        if (xnorm > 1e12 * (1.0 + norm_b) || ynorm > 1e12 * (1.0 + norm_c)) return out;

        Vec dinv = z.cwiseQuotient(x);
        for (int k = 0; k < n; ++k) {
            if (hu[k]) dinv[k] += v[k] / w[k];
        }
        dinv.array() += std::clamp(1e-2 * mu, 1e-13, 1e-10);
        if (!ne.factor(dinv)) return out;

        // Predictor.
        Vec rxz = -x.cwiseProduct(z);
        Vec rwv = -w.cwiseProduct(v).cwiseProduct(umask);
        Direction aff = solve_newton(rp, ru, rd, rxz, rwv);
        double ap = std::min(step_to_boundary(x, aff.dx), step_to_boundary(w, aff.dw, &hu));
        double ad = std::min(step_to_boundary(z, aff.dz), step_to_boundary(v, aff.dv, &hu));
        double mu_aff = ((x + ap * aff.dx).dot(z + ad * aff.dz) +
                         ((w + ap * aff.dw).cwiseProduct(v + ad * aff.dv)).cwiseProduct(umask).sum()) /
                        std::max(1, n + nu);
        double sigma = std::max(std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0), sigma_min);
        // Keep complementarity from collapsing ahead of primal feasibility.
        if (pinf > tol_p) sigma = std::max(sigma, std::min(1.0, 0.1 * pinf / mu));

        // Corrector with the second-order term.
        rxz = Vec::Constant(n, sigma * mu) - x.cwiseProduct(z) - aff.dx.cwiseProduct(aff.dz);
        rwv = (Vec::Constant(n, sigma * mu) - w.cwiseProduct(v) - aff.dw.cwiseProduct(aff.dv))
                  .cwiseProduct(umask);
        Direction d = solve_newton(rp, ru, rd, rxz, rwv);
        const double eta = std::max(0.9, 1.0 - 10.0 * mu);
        const double eta_c = std::min(eta, 0.9999);
        ap = eta_c * std::min(step_to_boundary(x, d.dx), step_to_boundary(w, d.dw, &hu));
        ad = eta_c * std::min(step_to_boundary(z, d.dz), step_to_boundary(v, d.dv, &hu));
        ap = std::min(ap, 1.0);
        ad = std::min(ad, 1.0);
        // A step that wrecks primal feasibility came from an inaccurate
        // Newton solve; retry it closer to the central path.
        {
            const double next_pinf = (b - A * (x + ap * d.dx)).lpNorm<Eigen::Infinity>() / (1.0 + norm_b);
            if (next_pinf > std::max(100.0 * pinf, tol_p) && sigma_min < 0.9) {
                sigma_min = std::min(0.9, std::max(0.1, 3.0 * sigma_min));
                continue;
            }
            sigma_min *= 0.5;
        }
        x += ap * d.dx;
        w += ap * d.dw;
        y += ad * d.dy;
        z += ad * d.dz;
        v += ad * d.dv;
        for (int k = 0; k < n; ++k) {
            if (!hu[k]) {
                w[k] = 0.0;
                v[k] = 0.0;
            }
        }
        // Split free columns drift apart together; pull both halves back.
        for (auto [kp, kn] : sf.free_pairs) {
            const double lift = std::min(x[kp], x[kn]) - 1.0;
            if (lift > 0.0) {
                x[kp] -= lift;
                x[kn] -= lift;
            }
        }
        if (!x.allFinite() || !y.allFinite() || !z.allFinite()) return out;
    }
    out.iterations = max_iter;
    return out;
}


// Unscaled standard-form primal, or empty when the solve did not converge.
std::optional<Vec> solve_scaled(StandardForm sf, const SolveOptions& opt,
                                std::chrono::steady_clock::time_point start, int& iterations) {
    Scaling sc = scale_in_place(sf);
    IpmOutcome o = run_ipm(sf, opt, start, sc.b_scale * sc.c_scale);
    iterations += o.iterations;
    if (o.status != SolveStatus::optimal) return std::nullopt;
    return Vec(o.x.cwiseProduct(sc.col) * sc.b_scale);
}

// Minimum total violation of Ax = b over the bounds, through the always
// feasible problem min 1'(s+ + s-) s.t. Ax + s+ - s- = b.
std::optional<double> min_violation(const StandardForm& sf, const SolveOptions& opt,
                                    std::chrono::steady_clock::time_point start, int& iterations) {
    const int m = static_cast<int>(sf.A.rows());
    const int n = static_cast<int>(sf.A.cols());
    StandardForm aux;
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < sf.A.outerSize(); ++k) {
        for (SpMat::InnerIterator it(sf.A, k); it; ++it) trip.emplace_back(it.row(), k, it.value());
    }
    for (int i = 0; i < m; ++i) {
        trip.emplace_back(i, n + i, 1.0);
        trip.emplace_back(i, n + m + i, -1.0);
    }
    aux.A.resize(m, n + 2 * m);
    aux.A.setFromTriplets(trip.begin(), trip.end());
    aux.b = sf.b;
    aux.c = Vec::Zero(n + 2 * m);
    aux.c.tail(2 * m).setOnes();
    aux.u = Vec::Constant(n + 2 * m, kInf);
    aux.u.head(n) = sf.u;
    aux.has_upper.assign(n + 2 * m, 0);
    std::copy(sf.has_upper.begin(), sf.has_upper.end(), aux.has_upper.begin());
    aux.free_pairs = sf.free_pairs;
    auto x = solve_scaled(std::move(aux), opt, start, iterations);
    if (!x) return std::nullopt;
    return x->tail(2 * m).sum();
}

// Most negative c'd over rays d >= 0 of the unbounded columns with A d = 0,
// normalized by 1'd <= 1.
std::optional<double> best_ray(const StandardForm& sf, const SolveOptions& opt,
                               std::chrono::steady_clock::time_point start, int& iterations) {
    const int m = static_cast<int>(sf.A.rows());
    std::vector<int> keep;
    for (int k = 0; k < sf.A.cols(); ++k) {
        if (!sf.has_upper[k]) keep.push_back(k);
    }
    const int n = static_cast<int>(keep.size());
    if (n == 0) return 0.0;
    StandardForm aux;
    std::vector<int> pos(sf.A.cols(), -1);
    for (int j = 0; j < n; ++j) pos[keep[j]] = j;
    for (auto [kp, kn] : sf.free_pairs) aux.free_pairs.emplace_back(pos[kp], pos[kn]);
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < n; ++j) {
        for (SpMat::InnerIterator it(sf.A, keep[j]); it; ++it) trip.emplace_back(it.row(), j, it.value());
        trip.emplace_back(m, j, 1.0);
    }
    trip.emplace_back(m, n, 1.0);
    aux.A.resize(m + 1, n + 1);
    aux.A.setFromTriplets(trip.begin(), trip.end());
    aux.b = Vec::Zero(m + 1);
    aux.b[m] = 1.0;
    aux.c = Vec::Zero(n + 1);
    for (int j = 0; j < n; ++j) aux.c[j] = sf.c[keep[j]];
    aux.u = Vec::Constant(n + 1, kInf);
    aux.has_upper.assign(n + 1, 0);
    auto x = solve_scaled(std::move(aux), opt, start, iterations);
    if (!x) return std::nullopt;
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += sf.c[keep[j]] * (*x)[j];
    return v;
}

}  // namespace

SolveResult solve_interior_point(const LinearProgram& lp, const SolveOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    Presolved p = presolve(lp);
    if (p.infeasible) {
        result.status = SolveStatus::infeasible;
        return result;
    }
    StandardForm sf = standardize(p);
    Vec x_std;
    if (sf.A.cols() > 0) {
        auto x = solve_scaled(sf, options, start, result.iterations);
        if (!x) {
            // Classify the failure with two auxiliary problems that are
            // feasible and bounded by construction.
            SolveOptions aux = options;
            aux.limits.iterations = 0;
            const double bnorm = sf.b.size() ? sf.b.lpNorm<Eigen::Infinity>() : 0.0;
            auto viol = min_violation(sf, aux, start, result.iterations);
            if (viol && *viol > 1e-6 * (1.0 + bnorm)) {
                result.status = SolveStatus::infeasible;
            } else if (viol) {
                auto ray = best_ray(sf, aux, start, result.iterations);
                const double cnorm = sf.c.size() ? sf.c.lpNorm<Eigen::Infinity>() : 0.0;
                if (ray && *ray < -1e-9 * (1.0 + cnorm)) result.status = SolveStatus::unbounded;
            }
            return result;
        }
        x_std = *x;
    }
    if (p.dual_infeasible) {
        result.status = SolveStatus::unbounded;
        return result;
    }
    std::vector<double> x = p.value;
    for (const ColumnMap& cm : sf.columns) {
        const int j = cm.original;
        switch (cm.form) {
            case ColumnForm::shifted: x[j] = p.lower[j] + x_std[cm.first]; break;
            case ColumnForm::mirrored: x[j] = p.upper[j] - x_std[cm.first]; break;
            case ColumnForm::split: x[j] = x_std[cm.first] - x_std[cm.second]; break;
        }
    }
    for (int j = 0; j < lp.num_variables(); ++j) {
        x[j] = std::clamp(x[j], lp.variable(j).lower, lp.variable(j).upper);
    }
    result.status = SolveStatus::optimal;
    result.primal = std::move(x);
    return result;
}

}  // namespace ldes::detail
