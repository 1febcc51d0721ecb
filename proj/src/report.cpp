#include "ldes/report.hpp"

#include "ldes/error.hpp"

#include <fmt/format.h>
#include <fstream>
#include <numeric>
#include <openssl/evp.h>
#include <sstream>

namespace ldes {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

double sum(const TimeSeries& s) { return std::accumulate(s.begin(), s.end(), 0.0); }

json point_json(const ViabilityPoint& p) {
    return {{"x_power_mw", p.x_power_mw},
            {"c_vc_per_kw", p.c_vc_per_kw},
            {"avoided_cost", p.avoided_cost},
            {"q_over", p.q_over},
            {"opportunity_cost", p.opportunity_cost},
            {"breakdown", breakdown_json(p.breakdown)}};
}

json dispatch_summary(const DispatchSolution& d) {
    json gens = json::array();
    for (const auto& g : d.generators) {
        gens.push_back({{"id", g.id},
                        {"technology", to_string(g.technology)},
                        {"kind", to_string(g.kind)},
                        {"capacity_mw", g.capacity_mw},
                        {"energy_mwh", sum(g.output)}});
    }
    json stores = json::array();
    for (const auto& s : d.storages) {
        stores.push_back({{"id", s.id},
                          {"kind", to_string(s.kind)},
                          {"power_mw", s.power_mw},
                          {"energy_mwh", s.energy_mwh},
                          {"charged_mwh", sum(s.charge)},
                          {"discharged_mwh", sum(s.discharge)},
                          {"simultaneous_hours", s.simultaneous_hours}});
    }
    return {{"generators", gens},
            {"storages", stores},
            {"shed_mwh", sum(d.shed)},
            {"surplus_mwh", sum(d.surplus)},
            {"reserve_shortage_mw_h", sum(d.reserve_shortage)},
            {"investments_mw", d.investments}};
}

std::string season_name(Season s) { return std::string(to_string(s)); }

}  // namespace

json breakdown_json(const ObjectiveBreakdown& b) {
    return {{"inv_gen", b.inv_gen},       {"inv_st_short", b.inv_st_short},
            {"ope_gen", b.ope_gen},       {"ies_gen", b.ies_gen},
            {"imbalance", b.imbalance},   {"ies_shortage", b.ies_shortage},
            {"fom_gen", b.fom_gen},       {"fom_st_short", b.fom_st_short},
            {"ldes_term", b.ldes_term},   {"q_over", b.q_over},
            {"total", b.total}};
}

json baseline_json(const SystemSpec& spec, const BaselineResult& b) {
    return {{"schema_version", kSchemaVersion},
            {"state", spec.state},
            {"horizon_h", spec.horizon_h},
            {"q_star", b.q_star},
            {"thermal_capacity_mw", b.thermal_capacity_mw},
            {"breakdown", breakdown_json(b.breakdown)},
            {"dispatch", dispatch_summary(b.dispatch)}};
}

json curve_json(const ViabilityCurve& c, const BaselineResult& baseline, const ViabilityPoint* without) {
    json j = {{"schema_version", kSchemaVersion}, {"state", c.state}, {"q_star", c.q_star}};
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(point_json(p));
    j["points"] = pts;
    if (c.points.empty()) {
        j["c_vc_max"] = nullptr;
        j["x_at_max_mw"] = nullptr;
        j["viable"] = false;
        j["min_viable_mw"] = nullptr;
        j["min_viable_bracket_mw"] = nullptr;
        j["alpha"] = nullptr;
    } else {
        MaxViability mv = max_viability(c);
        MinViable mn = min_viable_capacity(c);
        j["c_vc_max"] = mv.c_vc_max_per_kw;
        j["x_at_max_mw"] = mv.x_at_max_mw;
        j["viable"] = mv.viable;
        j["min_viable_mw"] = opt(mn.x_mw);
        j["min_viable_bracket_mw"] =
            mn.bracket ? json::array({mn.bracket->first, mn.bracket->second}) : json(nullptr);
        j["alpha"] = opt(alpha_ratio(mv.x_at_max_mw, baseline.thermal_capacity_mw));
        j["best_dispatch"] = dispatch_summary(best_point(c).dispatch);
    }
    j["units"] = {{"c_vc", "$/kW"}, {"cost", "$"}, {"capacity", "MW"}};
    j["definitions"] = {
        {"min_viable_mw", "smallest grid capacity whose avoided cost is >= 0"},
        {"alpha", "x_at_max_mw / baseline gas and coal capacity"},
        {"q_over", "max(0, opportunity cost - q_star)"}};
    if (without) j["without_ldes"] = point_json(*without);
    json fails = json::array();
    for (const auto& f : c.failures) fails.push_back({{"x_power_mw", f.x_power_mw}, {"error", f.message}});
    j["failures"] = fails;
    j["diagnostics"] = c.diagnostics;
    return j;
}

json metrics_json(const StateMetrics& m) {
    json soc = json::object();
    for (const auto& [s, v] : m.seasonal_soc_diff) soc[season_name(s)] = v;
    json avail = json::object();
    for (const auto& [s, a] : m.seasonal_ies_availability) {
        avail[season_name(s)] = {{"avg_cf", a.avg_cf}, {"rel_availability", a.rel_availability}};
    }
    return {{"schema_version", kSchemaVersion},
            {"state", m.state},
            {"thermal_participation", opt(m.thermal_participation)},
            {"thermal_utilization", opt(m.thermal_utilization)},
            {"avg_ies_cf", opt(m.avg_ies_cf)},
            {"thermal_fom_share", opt(m.thermal_fom_share)},
            {"solar_share", opt(m.solar_share)},
            {"wind_share", opt(m.wind_share)},
            {"alpha", opt(m.alpha)},
            {"c_vc_max", m.c_vc_max_per_kw},
            {"x_at_max_mw", m.x_at_max_mw},
            {"min_viable_mw", opt(m.min_viable_mw)},
            {"seasonal_soc_diff", soc},
            {"seasonal_ies_availability", avail}};
}

json rollup_json(const NationalRollup& r) {
    json j = {{"schema_version", kSchemaVersion},
              {"states", r.states},
              {"excluded_states", r.excluded_states},
              {"horizon_h", r.horizon_h},
              {"q_star", r.q_star},
              {"avoided_cost", r.avoided_cost},
              {"ldes_power_mw", r.ldes_power_mw},
              {"baseline_capacity_mw", r.baseline_capacity_mw},
              {"opportunity_capacity_mw", r.opportunity_capacity_mw},
              {"replacement_delta_mw", r.replacement_delta_mw},
              {"baseline_cost", breakdown_json(r.baseline_cost)},
              {"opportunity_cost", breakdown_json(r.opportunity_cost)}};
    j["opportunity_without_ldes_cost"] =
        r.without_ldes_cost.present ? breakdown_json(r.without_ldes_cost.terms) : json(nullptr);
    return j;
}

std::string curve_csv(const ViabilityCurve& c) {
    std::string out = "state,x_power_mw,c_vc_per_kw,avoided_cost,q_over\n";
    for (const auto& p : c.points) {
        out += fmt::format("{},{},{},{},{}\n", c.state, p.x_power_mw, p.c_vc_per_kw, p.avoided_cost, p.q_over);
    }
    return out;
}

std::string seasonal_csv(const std::vector<StateMetrics>& metrics) {
    std::string out = "state,season,soc_diff,avg_cf,rel_availability\n";
    for (const auto& m : metrics) {
        for (Season s : kAllSeasons) {
            auto soc = m.seasonal_soc_diff.find(s);
            auto av = m.seasonal_ies_availability.find(s);
            out += fmt::format("{},{},{},{},{}\n", m.state, to_string(s),
                               soc != m.seasonal_soc_diff.end() ? fmt::format("{}", soc->second) : "",
                               av != m.seasonal_ies_availability.end() ? fmt::format("{}", av->second.avg_cf) : "",
                               av != m.seasonal_ies_availability.end()
                                   ? fmt::format("{}", av->second.rel_availability)
                                   : "");
        }
    }
    return out;
}

std::string histogram_csv(const std::vector<HistogramBin>& bins) {
    std::string out = "bin_start,count\n";
    for (const auto& b : bins) out += fmt::format("{},{}\n", b.bin_start, b.count);
    return out;
}

void write_text(const fs::path& path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot write {}", path.string()));
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw IoError(fmt::format("failed writing {}", path.string()));
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
}

std::string sha256_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << f.rdbuf();
    return sha256_hex(ss.str());
}

}  // namespace ldes
