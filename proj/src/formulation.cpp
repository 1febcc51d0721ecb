#include "ldes/formulation.hpp"

#include "ldes/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace ldes {

namespace {

constexpr double kOverEpsilon = 1e3;

bool retired(const ModelMode& mode, const GeneratorAsset& g) {
    return mode.kind == ModelKind::opportunity && mode.retire_technologies.count(g.technology) > 0;
}

void check_mode(const SystemSpec& spec, const ModelMode& mode) {
    if (mode.kind == ModelKind::baseline) return;
    if (mode.form == OpportunityForm::viability) {
        if (!(mode.x_power_mw > 0.0) || !std::isfinite(mode.x_power_mw)) {
            throw ArgumentError(fmt::format("x_power_mw must be > 0, got {}", mode.x_power_mw));
        }
        if (!std::isfinite(mode.q_star)) throw ArgumentError("q_star must be finite");
    } else if (!(mode.x_power_mw >= 0.0) || !std::isfinite(mode.x_power_mw)) {
        throw ArgumentError(fmt::format("x_power_mw must be >= 0, got {}", mode.x_power_mw));
    }
    if (mode.x_power_mw > 0.0 && !spec.expanded()) {
        throw ArgumentError("opportunity model with LDES needs an expanded system (no LDES asset)");
    }
}

class Builder {
public:
    Builder(const SystemSpec& spec, const ModelMode& mode, DispatchModel& out)
        : spec_(spec), mode_(mode), lp_(out.lp), L_(out.layout), T_(spec.horizon_h) {}

    void build() {
        L_.generators.resize(spec_.generators.size());
        L_.storages.resize(spec_.storages.size());
        const double w = spec_.hour_weight;
        const PenaltyPrices& pp = spec_.penalty_prices;

        std::vector<std::vector<std::pair<int, double>>> balance(T_), reserve(T_);

        for (std::size_t k = 0; k < spec_.generators.size(); ++k) {
            const GeneratorAsset& g = spec_.generators[k];
            if (retired(mode_, g)) continue;
            GeneratorColumns& gc = L_.generators[k];
            gc.active = true;
            const bool cand = g.kind == AssetKind::candidate;
            if (cand) {
                const double ub = mode_.kind == ModelKind::baseline ? 0.0 : g.max_invest_mw;
                gc.invest = var(fmt::format("x_{}", g.id), 0.0, ub);
                cost(gc.invest, CostTerm::inv_gen, g.invest_cost);
                cost(gc.invest, CostTerm::fom_gen, g.fom_cost);
            } else {
                L_.constants[static_cast<int>(CostTerm::fom_gen)] += g.fom_cost * g.capacity_mw;
            }
            const TimeSeries* cf = g.intermittent() ? &spec_.profile(g) : nullptr;
            for (int t = 0; t < T_; ++t) {
                double ub = kInf;
                if (!cand) ub = cf ? g.capacity_mw * (*cf)[t] : g.capacity_mw;
                const int p = var(fmt::format("p_{}_{}", g.id, t), 0.0, ub);
                gc.output.push_back(p);
                cost(p, CostTerm::ope_gen, w * g.variable_cost);
                balance[t].push_back({p, 1.0});
                if (cf) {
                    if (cand) {
                        row(fmt::format("avail_{}_{}", g.id, t), {{p, 1.0}, {gc.invest, -(*cf)[t]}},
                            RowSense::less_equal, 0.0);
                    }
                    continue;
                }
                const int r = var(fmt::format("r_{}_{}", g.id, t), 0.0, kInf);
                gc.reserve.push_back(r);
                cost(r, CostTerm::ies_gen, w * pp.reserve_provision_cost);
                reserve[t].push_back({r, 1.0});
                if (cand) {
                    row(fmt::format("head_{}_{}", g.id, t), {{p, 1.0}, {r, 1.0}, {gc.invest, -1.0}},
                        RowSense::less_equal, 0.0);
                } else {
                    row(fmt::format("head_{}_{}", g.id, t), {{p, 1.0}, {r, 1.0}}, RowSense::less_equal,
                        g.capacity_mw);
                }
            }
            if (!cf && g.ramp_rate < 1.0) {
                for (int t = 1; t < T_; ++t) {
                    const int p1 = gc.output[t];
                    const int p0 = gc.output[t - 1];
                    if (cand) {
                        row(fmt::format("rampup_{}_{}", g.id, t),
                            {{p1, 1.0}, {p0, -1.0}, {gc.invest, -g.ramp_rate}}, RowSense::less_equal, 0.0);
                        row(fmt::format("rampdn_{}_{}", g.id, t),
                            {{p0, 1.0}, {p1, -1.0}, {gc.invest, -g.ramp_rate}}, RowSense::less_equal, 0.0);
                    } else {
                        const double lim = g.ramp_rate * g.capacity_mw;
                        row(fmt::format("rampup_{}_{}", g.id, t), {{p1, 1.0}, {p0, -1.0}},
                            RowSense::less_equal, lim);
                        row(fmt::format("rampdn_{}_{}", g.id, t), {{p0, 1.0}, {p1, -1.0}},
                            RowSense::less_equal, lim);
                    }
                }
            }
        }

        for (std::size_t k = 0; k < spec_.storages.size(); ++k) {
            const StorageAsset& s = spec_.storages[k];
            StorageColumns& sc = L_.storages[k];
            const bool cand = s.kind == StorageKind::sdes_candidate;
            if (s.kind == StorageKind::ldes) {
                if (mode_.kind == ModelKind::baseline || !(mode_.x_power_mw > 0.0)) continue;
                sc.power_mw = mode_.x_power_mw;
            } else if (!cand) {
                sc.power_mw = s.power_mw;
                L_.constants[static_cast<int>(CostTerm::fom_st_short)] += s.fom_cost * s.power_mw;
            }
            sc.active = true;
            if (cand) {
                const double ub = mode_.kind == ModelKind::baseline ? 0.0 : s.max_invest_mw;
                sc.invest = var(fmt::format("x_{}", s.id), 0.0, ub);
                cost(sc.invest, CostTerm::inv_st_short, s.invest_cost);
                cost(sc.invest, CostTerm::fom_st_short, s.fom_cost);
            }
            const double eta = std::sqrt(s.rte);
            const double P = cand ? kInf : sc.power_mw;
            const double E = cand ? kInf : s.duration_h * sc.power_mw;
            for (int t = 0; t < T_; ++t) {
                sc.charge.push_back(var(fmt::format("ch_{}_{}", s.id, t), 0.0, P));
                sc.discharge.push_back(var(fmt::format("dis_{}_{}", s.id, t), 0.0, P));
                sc.soc.push_back(var(fmt::format("soc_{}_{}", s.id, t), 0.0, E));
                sc.reserve.push_back(var(fmt::format("rs_{}_{}", s.id, t), 0.0, kInf));
            }
            for (int t = 0; t < T_; ++t) {
                const int c = sc.charge[t], d = sc.discharge[t], e = sc.soc[t], r = sc.reserve[t];
                const int prev = sc.soc[(t + T_ - 1) % T_];
                cost(r, CostTerm::ies_gen, w * pp.reserve_provision_cost);
                balance[t].push_back({d, 1.0});
                balance[t].push_back({c, -1.0});
                reserve[t].push_back({r, 1.0});
                row(fmt::format("socbal_{}_{}", s.id, t), {{e, 1.0}, {prev, -1.0}, {c, -eta}, {d, 1.0 / eta}},
                    RowSense::equal, 0.0);
                row(fmt::format("sres_{}_{}", s.id, t), {{d, 1.0}, {r, 1.0}, {prev, -eta}},
                    RowSense::less_equal, 0.0);
                if (cand) {
                    row(fmt::format("shead_{}_{}", s.id, t), {{d, 1.0}, {r, 1.0}, {sc.invest, -1.0}},
                        RowSense::less_equal, 0.0);
                    row(fmt::format("schg_{}_{}", s.id, t), {{c, 1.0}, {sc.invest, -1.0}},
                        RowSense::less_equal, 0.0);
                    row(fmt::format("scap_{}_{}", s.id, t), {{e, 1.0}, {sc.invest, -s.duration_h}},
                        RowSense::less_equal, 0.0);
                } else {
                    row(fmt::format("shead_{}_{}", s.id, t), {{d, 1.0}, {r, 1.0}}, RowSense::less_equal,
                        sc.power_mw);
                }
            }
        }

        for (int t = 0; t < T_; ++t) {
            const int shed = var(fmt::format("shed_{}", t), 0.0, kInf);
            const int surplus = var(fmt::format("surplus_{}", t), 0.0, kInf);
            const int shortage = var(fmt::format("short_{}", t), 0.0, kInf);
            L_.shed.push_back(shed);
            L_.surplus.push_back(surplus);
            L_.shortage.push_back(shortage);
            cost(shed, CostTerm::imbalance, w * pp.imbalance_shed);
            cost(surplus, CostTerm::imbalance, w * pp.imbalance_surplus);
            cost(shortage, CostTerm::ies_shortage, w * pp.reserve_shortage);
            balance[t].push_back({shed, 1.0});
            balance[t].push_back({surplus, -1.0});
            reserve[t].push_back({shortage, 1.0});
            row(fmt::format("bal_{}", t), std::move(balance[t]), RowSense::equal, spec_.load[t]);
            row(fmt::format("res_{}", t), std::move(reserve[t]), RowSense::greater_equal,
                spec_.reserve_fraction * spec_.load[t]);
        }

        double constant = 0.0;
        for (double c : L_.constants) constant += c;
        if (mode_.kind == ModelKind::opportunity && mode_.form == OpportunityForm::viability) {
            lp_.sense = ObjectiveSense::maximize;
            L_.c_vc = var("c_vc", -kInf, kInf, 1.0);
            L_.q_over = var("q_over", 0.0, kInf, -(1.0 + kOverEpsilon) / mode_.x_power_mw);
            std::vector<std::pair<int, double>> coef;
            for (const CostEntry& e : L_.costs) coef.push_back({e.variable, e.coefficient});
            coef.push_back({L_.c_vc, mode_.x_power_mw});
            coef.push_back({L_.q_over, -1.0});
            L_.cost_row = row("viability", merge(std::move(coef)), RowSense::less_equal,
                              mode_.q_star - constant);
        } else {
            lp_.sense = ObjectiveSense::minimize;
            lp_.objective_offset = constant;
            for (const CostEntry& e : L_.costs) lp_.variable(e.variable).objective += e.coefficient;
        }
    }

private:
    int var(std::string name, double lo, double hi, double obj = 0.0) {
        return lp_.add_variable(std::move(name), lo, hi, obj);
    }

    int row(std::string name, std::vector<std::pair<int, double>> coef, RowSense sense, double rhs) {
        return lp_.add_constraint(std::move(name), std::move(coef), sense, rhs);
    }

    void cost(int j, CostTerm term, double c) {
        if (c != 0.0) L_.costs.push_back({j, term, c});
    }

    static std::vector<std::pair<int, double>> merge(std::vector<std::pair<int, double>> v) {
        std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
        std::vector<std::pair<int, double>> out;
        for (auto& [j, a] : v) {
            if (!out.empty() && out.back().first == j) out.back().second += a;
            else out.push_back({j, a});
        }
        return out;
    }

    const SystemSpec& spec_;
    const ModelMode& mode_;
    LinearProgram& lp_;
    ModelLayout& L_;
    int T_;
};

TimeSeries gather(const std::vector<int>& cols, const std::vector<double>& x) {
    TimeSeries out;
    out.reserve(cols.size());
    for (int j : cols) out.push_back(x[j]);
    return out;
}

}  // namespace

ModelMode ModelMode::baseline() { return ModelMode{}; }

ModelMode ModelMode::opportunity(double x_power_mw, double q_star, OpportunityForm form) {
    ModelMode m;
    m.kind = ModelKind::opportunity;
    m.x_power_mw = x_power_mw;
    m.q_star = q_star;
    m.form = form;
    return m;
}

double ObjectiveBreakdown::system_cost() const {
    return inv_gen + inv_st_short + ope_gen + ies_gen + imbalance + ies_shortage + fom_gen +
           fom_st_short;
}

double& ObjectiveBreakdown::term(CostTerm t) {
    switch (t) {
        case CostTerm::inv_gen: return inv_gen;
        case CostTerm::inv_st_short: return inv_st_short;
        case CostTerm::ope_gen: return ope_gen;
        case CostTerm::ies_gen: return ies_gen;
        case CostTerm::imbalance: return imbalance;
        case CostTerm::ies_shortage: return ies_shortage;
        case CostTerm::fom_gen: return fom_gen;
        case CostTerm::fom_st_short: return fom_st_short;
    }
    return total;
}

double ObjectiveBreakdown::term(CostTerm t) const {
    return const_cast<ObjectiveBreakdown*>(this)->term(t);
}

DispatchModel build_model(const SystemSpec& spec, const ModelMode& mode) {
    try {
        validate(spec);
    } catch (const ValidationError& e) {
        throw StateError(fmt::format("system is not valid: {}", e.what()));
    }
    if (spec.horizon_h < 2) {
        throw ArgumentError(fmt::format("horizon must be at least 2 hours, got {}", spec.horizon_h));
    }
    check_mode(spec, mode);
    DispatchModel model;
    model.spec = spec;
    model.mode = mode;
    Builder(model.spec, model.mode, model).build();
    return model;
}

LinearProgram build_baseline_lp(const SystemSpec& spec) {
    return build_model(spec, ModelMode::baseline()).lp;
}

LinearProgram build_opportunity_lp(const SystemSpec& spec, const ModelMode& mode) {
    if (mode.kind != ModelKind::opportunity) throw ArgumentError("mode is not opportunity");
    return build_model(spec, mode).lp;
}

ObjectiveBreakdown breakdown(const DispatchModel& model, const std::vector<double>& x, double tol) {
    const LinearProgram& lp = model.lp;
    if (static_cast<int>(x.size()) != lp.num_variables()) {
        throw ArgumentError(fmt::format("primal has {} values, model has {} variables", x.size(),
                                        lp.num_variables()));
    }
    double worst = 0.0;
    std::string where;
    for (int j = 0; j < lp.num_variables(); ++j) {
        const Variable& v = lp.variable(j);
        const double viol = std::max(v.lower - x[j], x[j] - v.upper);
        const double scale = 1.0 + std::max(std::isfinite(v.lower) ? std::abs(v.lower) : 0.0,
                                            std::isfinite(v.upper) ? std::abs(v.upper) : 0.0);
        if (viol / scale > worst) {
            worst = viol / scale;
            where = v.name;
        }
    }
    for (const Constraint& c : lp.constraints()) {
        double lhs = 0.0;
        for (auto [j, a] : c.coefficients) lhs += a * x[j];
        double viol = c.sense == RowSense::less_equal      ? lhs - c.rhs
                      : c.sense == RowSense::greater_equal ? c.rhs - lhs
                                                           : std::abs(lhs - c.rhs);
        viol /= 1.0 + std::abs(c.rhs);
        if (viol > worst) {
            worst = viol;
            where = c.name;
        }
    }
    if (worst > tol) {
        throw ConsistencyError(
            fmt::format("primal violates '{}' by {:.3e} (relative), above {:.1e}", where, worst, tol));
    }

    const ModelLayout& L = model.layout;
    ObjectiveBreakdown b;
    for (int k = 0; k < kNumCostTerms; ++k) b.term(static_cast<CostTerm>(k)) = L.constants[k];
    for (const CostEntry& e : L.costs) b.term(e.term) += e.coefficient * x[e.variable];
    if (L.c_vc >= 0) b.ldes_term = x[L.c_vc] * model.mode.x_power_mw;
    if (L.q_over >= 0) b.q_over = x[L.q_over];
    b.total = b.system_cost() + b.ldes_term;
    return b;
}

const GeneratorDispatch* DispatchSolution::find_generator(const std::string& id) const {
    for (const auto& g : generators) {
        if (g.id == id) return &g;
    }
    return nullptr;
}

const StorageDispatch* DispatchSolution::find_storage(const std::string& id) const {
    for (const auto& s : storages) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

int DispatchSolution::simultaneous_hours() const {
    int n = 0;
    for (const auto& s : storages) n += s.simultaneous_hours;
    return n;
}

DispatchSolution extract_dispatch(const DispatchModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.lp.num_variables()) {
        throw ArgumentError("primal size does not match the model");
    }
    const SystemSpec& spec = model.spec;
    const ModelLayout& L = model.layout;
    DispatchSolution out;
    out.horizon_h = spec.horizon_h;
    for (std::size_t k = 0; k < spec.generators.size(); ++k) {
        const GeneratorColumns& gc = L.generators[k];
        if (!gc.active) continue;
        const GeneratorAsset& g = spec.generators[k];
        GeneratorDispatch d;
        d.id = g.id;
        d.technology = g.technology;
        d.kind = g.kind;
        d.capacity_mw = gc.invest >= 0 ? x[gc.invest] : g.capacity_mw;
        d.output = gather(gc.output, x);
        d.reserve = gc.reserve.empty() ? TimeSeries(spec.horizon_h, 0.0) : gather(gc.reserve, x);
        if (gc.invest >= 0) out.investments[g.id] = x[gc.invest];
        out.generators.push_back(std::move(d));
    }
    for (std::size_t k = 0; k < spec.storages.size(); ++k) {
        const StorageColumns& sc = L.storages[k];
        if (!sc.active) continue;
        const StorageAsset& s = spec.storages[k];
        StorageDispatch d;
        d.id = s.id;
        d.kind = s.kind;
        d.rte = s.rte;
        d.power_mw = sc.invest >= 0 ? x[sc.invest] : sc.power_mw;
        d.energy_mwh = s.duration_h * d.power_mw;
        d.charge = gather(sc.charge, x);
        d.discharge = gather(sc.discharge, x);
        d.soc = gather(sc.soc, x);
        d.reserve = gather(sc.reserve, x);
        for (int t = 0; t < spec.horizon_h; ++t) {
            if (d.charge[t] > kSimultaneousTol && d.discharge[t] > kSimultaneousTol) ++d.simultaneous_hours;
        }
        if (sc.invest >= 0) out.investments[s.id] = x[sc.invest];
        out.storages.push_back(std::move(d));
    }
    out.shed = gather(L.shed, x);
    out.surplus = gather(L.surplus, x);
    out.reserve_shortage = gather(L.shortage, x);
    return out;
}

}  // namespace ldes
