#pragma once

#include "ldes/lp.hpp"
#include "ldes/system.hpp"

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ldes {

enum class ModelKind { baseline, opportunity };

// viability: the LP with the free c_vc variable and the q_over slack.
// replacement: minimum cost of the retired system with the LDES free of
// charge; c_vc then follows as (q_star - cost) / x_power. With x_power = 0
// the LDES is left out entirely.
enum class OpportunityForm { viability, replacement };

struct ModelMode {
    ModelKind kind = ModelKind::baseline;
    double x_power_mw = 0.0;
    double q_star = 0.0;
    std::set<Technology> retire_technologies{Technology::gas, Technology::coal};
    OpportunityForm form = OpportunityForm::viability;

    static ModelMode baseline();
    static ModelMode opportunity(double x_power_mw, double q_star,
                                 OpportunityForm form = OpportunityForm::viability);
};

enum class CostTerm {
    inv_gen,
    inv_st_short,
    ope_gen,
    ies_gen,
    imbalance,
    ies_shortage,
    fom_gen,
    fom_st_short
};

inline constexpr int kNumCostTerms = 8;

struct ObjectiveBreakdown {
    double inv_gen = 0.0;
    double inv_st_short = 0.0;
    double ope_gen = 0.0;
    double ies_gen = 0.0;
    double imbalance = 0.0;
    double ies_shortage = 0.0;
    double fom_gen = 0.0;
    double fom_st_short = 0.0;
    double ldes_term = 0.0;
    double q_over = 0.0;
    // Sum of the eight cost terms plus ldes_term; q_over is not added.
    double total = 0.0;

    double system_cost() const;
    double& term(CostTerm t);
    double term(CostTerm t) const;
};

struct CostEntry {
    int variable = -1;
    CostTerm term = CostTerm::ope_gen;
    double coefficient = 0.0;
};

// Column indices of the model, -1 where absent. Hourly vectors are empty for
// assets that are not part of the model.
struct GeneratorColumns {
    std::vector<int> output;
    std::vector<int> reserve;
    int invest = -1;
    bool active = false;
};

struct StorageColumns {
    std::vector<int> charge;
    std::vector<int> discharge;
    std::vector<int> soc;
    std::vector<int> reserve;
    int invest = -1;
    double power_mw = 0.0;  // fixed rating, for existing storage and the LDES
    bool active = false;
};

struct ModelLayout {
    std::vector<GeneratorColumns> generators;  // parallel to spec.generators
    std::vector<StorageColumns> storages;      // parallel to spec.storages
    std::vector<int> shed, surplus, shortage;
    int c_vc = -1;
    int q_over = -1;
    int cost_row = -1;
    std::vector<CostEntry> costs;
    std::array<double, kNumCostTerms> constants{};
};

struct DispatchModel {
    SystemSpec spec;
    ModelMode mode;
    LinearProgram lp;
    ModelLayout layout;
};

// Throws StateError if spec does not validate, ArgumentError if the horizon
// is shorter than two hours or the mode is inconsistent.
DispatchModel build_model(const SystemSpec& spec, const ModelMode& mode);
LinearProgram build_baseline_lp(const SystemSpec& spec);
LinearProgram build_opportunity_lp(const SystemSpec& spec, const ModelMode& mode);

// Throws ConsistencyError if primal violates the LP by more than tol
// (absolute, scaled by 1 + |rhs|).
ObjectiveBreakdown breakdown(const DispatchModel& model, const std::vector<double>& primal,
                             double tol = 1e-6);

struct GeneratorDispatch {
    std::string id;
    Technology technology = Technology::other;
    AssetKind kind = AssetKind::existing;
    double capacity_mw = 0.0;  // installed, or invested for candidates
    TimeSeries output;
    TimeSeries reserve;
};

struct StorageDispatch {
    std::string id;
    StorageKind kind = StorageKind::sdes_existing;
    double power_mw = 0.0;
    double energy_mwh = 0.0;
    double rte = 1.0;
    TimeSeries charge;
    TimeSeries discharge;
    TimeSeries soc;  // end of each hour
    TimeSeries reserve;
    int simultaneous_hours = 0;
};

struct DispatchSolution {
    int horizon_h = 0;
    std::vector<GeneratorDispatch> generators;
    std::vector<StorageDispatch> storages;
    TimeSeries shed;
    TimeSeries surplus;
    TimeSeries reserve_shortage;
    std::map<std::string, double> investments;  // candidate id -> MW

    const GeneratorDispatch* find_generator(const std::string& id) const;
    const StorageDispatch* find_storage(const std::string& id) const;
    int simultaneous_hours() const;
};

// Charge and discharge both above this in one hour count as simultaneous.
inline constexpr double kSimultaneousTol = 1e-6;

DispatchSolution extract_dispatch(const DispatchModel& model, const std::vector<double>& primal);

}  // namespace ldes
