#include "ldes/ingestion.hpp"

#include "ldes/csv.hpp"
#include "ldes/error.hpp"
#include "ldes/kmeans.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ldes {

namespace fs = std::filesystem;

namespace {

constexpr double kPerKw = 1000.0;  // $/kW -> $/MW

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() ||
        !std::isfinite(v)) {
        throw ValidationError(fmt::format("config key '{}': not a number: '{}'", key, value));
    }
    return v;
}

long parse_long(const std::string& key, const std::string& value) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        throw ValidationError(fmt::format("config key '{}': not an integer: '{}'", key, value));
    }
    return v;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Ids become parts of LP column names, which must not contain separators.
void check_id(const csv::Table& t, std::size_t row, const std::string& id) {
    if (id.empty() || id.find_first_of(" \t,\"") != std::string::npos) {
        throw ValidationError(
            fmt::format("{}:{}: invalid asset id '{}'", t.source(), t.line_of(row), id));
    }
}

}  // namespace

SeasonCalendar RunConfig::calendar() const {
    const bool any = winter_start_h || spring_start_h || summer_start_h || fall_start_h;
    if (!any) return SeasonCalendar::meteorological(horizon_h);
    if (!(winter_start_h && spring_start_h && summer_start_h && fall_start_h)) {
        const char* missing = !winter_start_h   ? "season.winter_start_h"
                              : !spring_start_h ? "season.spring_start_h"
                              : !summer_start_h ? "season.summer_start_h"
                                                : "season.fall_start_h";
        throw ValidationError(fmt::format("missing config key '{}'", missing));
    }
    return SeasonCalendar(horizon_h, *winter_start_h, *spring_start_h, *summer_start_h,
                          *fall_start_h);
}

RunConfig parse_config(std::string_view text, std::string_view source) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ValidationError(fmt::format("{}:{}: duplicate config key '{}'", source, line_no, key));
        }
        auto num = [&] { return parse_double(key, value); };
        auto cost = [&] { return parse_double(key, value) * kPerKw; };

        if (key == "state") {
            cfg.state = value;
        } else if (key == "horizon_h") {
            cfg.horizon_h = static_cast<int>(parse_long(key, value));
        } else if (key == "reserve_fraction") {
            cfg.reserve_fraction = num();
        } else if (key == "hour_weight") {
            cfg.hour_weight = num();
        } else if (key == "penalty.shed_per_mwh") {
            cfg.penalty_prices.imbalance_shed = num();
        } else if (key == "penalty.surplus_per_mwh") {
            cfg.penalty_prices.imbalance_surplus = num();
        } else if (key == "penalty.reserve_shortage_per_mw") {
            cfg.penalty_prices.reserve_shortage = num();
        } else if (key == "penalty.reserve_provision_per_mw") {
            cfg.penalty_prices.reserve_provision_cost = num();
        } else if (key == "season.winter_start_h") {
            cfg.winter_start_h = static_cast<int>(parse_long(key, value));
        } else if (key == "season.spring_start_h") {
            cfg.spring_start_h = static_cast<int>(parse_long(key, value));
        } else if (key == "season.summer_start_h") {
            cfg.summer_start_h = static_cast<int>(parse_long(key, value));
        } else if (key == "season.fall_start_h") {
            cfg.fall_start_h = static_cast<int>(parse_long(key, value));
        } else if (key == "candidates.ies_multiplier") {
            cfg.rules.ies_multiplier = num();
        } else if (starts_with(key, "candidates.ies_multiplier.")) {
            cfg.rules.ies_multiplier_overrides[key.substr(26)] = num();
        } else if (key == "candidates.sdes_multiplier") {
            cfg.rules.sdes_multiplier = num();
        } else if (key == "candidates.sdes_duration_h") {
            cfg.rules.sdes_duration_h = num();
        } else if (key == "candidates.sdes_rte") {
            cfg.rules.sdes_rte = num();
        } else if (key == "candidates.ldes_duration_h") {
            cfg.rules.ldes_duration_h = num();
        } else if (key == "candidates.ldes_rte") {
            cfg.rules.ldes_rte = num();
        } else if (starts_with(key, "candidates.invest_per_kw_yr.")) {
            auto tech = parse_technology(key.substr(28));
            if (!tech || !is_intermittent(*tech)) {
                throw ValidationError(fmt::format("{}:{}: unknown config key '{}'", source, line_no, key));
            }
            cfg.rules.ies_invest_cost[*tech] = cost();
        } else if (key == "candidates.sdes_invest_per_kw_yr") {
            cfg.rules.sdes_invest_cost = cost();
        } else if (key == "candidates.sdes_fom_per_kw_yr") {
            cfg.rules.sdes_fom_cost = cost();
        } else if (key == "clustering.k") {
            cfg.cluster_k = static_cast<int>(parse_long(key, value));
        } else if (key == "clustering.seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
        } else {
            throw ValidationError(fmt::format("{}:{}: unknown config key '{}'", source, line_no, key));
        }
    }
    for (const char* required : {"state", "horizon_h"}) {
        if (!seen.count(required)) {
            throw ValidationError(fmt::format("{}: missing config key '{}'", source, required));
        }
    }
    if (cfg.horizon_h < 1) throw ValidationError("config key 'horizon_h' must be >= 1");
    if (cfg.cluster_k < 1) throw ValidationError("config key 'clustering.k' must be >= 1");
    const CandidateRules& r = cfg.rules;
    if (r.ies_multiplier < 0 || r.sdes_multiplier < 0) {
        throw ValidationError("candidate multipliers must be >= 0");
    }
    for (const auto& [state, m] : r.ies_multiplier_overrides) {
        if (m < 0) throw ValidationError(fmt::format("config key 'candidates.ies_multiplier.{}' must be >= 0", state));
    }
    if (!(r.ldes_rte > 0 && r.ldes_rte <= 1) || !(r.sdes_rte > 0 && r.sdes_rte <= 1)) {
        throw ValidationError("candidate round-trip efficiencies must lie in (0, 1]");
    }
    if (!(r.ldes_duration_h > 0) || !(r.sdes_duration_h > 0)) {
        throw ValidationError("candidate storage durations must be > 0");
    }
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    return parse_config(read_file(path), path.filename().string());
}

std::string format_config(const RunConfig& c) {
    using csv::format_number;
    std::string out;
    auto kv = [&out](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
    kv("state", c.state);
    kv("horizon_h", std::to_string(c.horizon_h));
    kv("reserve_fraction", format_number(c.reserve_fraction));
    kv("hour_weight", format_number(c.hour_weight));
    kv("penalty.shed_per_mwh", format_number(c.penalty_prices.imbalance_shed));
    kv("penalty.surplus_per_mwh", format_number(c.penalty_prices.imbalance_surplus));
    kv("penalty.reserve_shortage_per_mw", format_number(c.penalty_prices.reserve_shortage));
    kv("penalty.reserve_provision_per_mw", format_number(c.penalty_prices.reserve_provision_cost));
    SeasonCalendar cal = c.calendar();
    kv("season.winter_start_h", std::to_string(cal.start(Season::winter)));
    kv("season.spring_start_h", std::to_string(cal.start(Season::spring)));
    kv("season.summer_start_h", std::to_string(cal.start(Season::summer)));
    kv("season.fall_start_h", std::to_string(cal.start(Season::fall)));
    kv("candidates.ies_multiplier", format_number(c.rules.ies_multiplier));
    for (const auto& [state, m] : c.rules.ies_multiplier_overrides) {
        kv("candidates.ies_multiplier." + state, format_number(m));
    }
    kv("candidates.sdes_multiplier", format_number(c.rules.sdes_multiplier));
    kv("candidates.sdes_duration_h", format_number(c.rules.sdes_duration_h));
    kv("candidates.sdes_rte", format_number(c.rules.sdes_rte));
    kv("candidates.ldes_duration_h", format_number(c.rules.ldes_duration_h));
    kv("candidates.ldes_rte", format_number(c.rules.ldes_rte));
    for (const auto& [tech, v] : c.rules.ies_invest_cost) {
        kv(fmt::format("candidates.invest_per_kw_yr.{}", to_string(tech)), format_number(v / kPerKw));
    }
    kv("candidates.sdes_invest_per_kw_yr", format_number(c.rules.sdes_invest_cost / kPerKw));
    kv("candidates.sdes_fom_per_kw_yr", format_number(c.rules.sdes_fom_cost / kPerKw));
    kv("clustering.k", std::to_string(c.cluster_k));
    kv("clustering.seed", std::to_string(c.seed));
    return out;
}

namespace {

TimeSeries read_load(const fs::path& dir, int horizon) {
    auto t = csv::Table::read(dir / kLoadFile);
    const auto hc = t.column("hour");
    const auto lc = t.column("load_mw");
    TimeSeries load(horizon, 0.0);
    std::vector<bool> seen(horizon, false);
    for (std::size_t r = 0; r < t.rows(); ++r) {
        long h = t.integer(r, hc);
        if (h < 0 || h >= horizon) {
            throw ValidationError(fmt::format("{}:{}: hour {} outside horizon [0, {})", t.source(),
                                              t.line_of(r), h, horizon));
        }
        if (seen[h]) {
            throw ValidationError(fmt::format("{}:{}: duplicate hour {}", t.source(), t.line_of(r), h));
        }
        seen[h] = true;
        double v = t.number(r, lc);
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(fmt::format("{}:{}: load must be >= 0", t.source(), t.line_of(r)));
        }
        load[h] = v;
    }
    if (static_cast<int>(t.rows()) != horizon) {
        throw ValidationError(
            fmt::format("{}: {} hours given, horizon is {}", t.source(), t.rows(), horizon));
    }
    return load;
}

std::vector<GeneratorAsset> read_generators(const fs::path& dir, const std::string& state) {
    auto t = csv::Table::read(dir / kGeneratorsFile);
    const auto c_id = t.column("id");
    const auto c_ba = t.column("ba");
    const auto c_state = t.column("state");
    const auto c_tech = t.column("technology");
    const auto c_cap = t.column("capacity_mw");
    const auto c_vc = t.column("variable_cost_per_mwh");
    const auto c_fuel = t.column("fuel_price");
    const auto c_hr = t.column("heat_rate");
    const auto c_fom = t.column("fom_per_kw_yr");
    const auto c_ramp = t.column("ramp_frac_per_h");
    const auto c_kind = t.column("kind");
    const auto c_max = t.column("max_invest_mw");
    const auto c_inv = t.column("invest_cost_per_kw_yr");
    std::vector<GeneratorAsset> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        GeneratorAsset g;
        g.id = t.cell(r, c_id);
        check_id(t, r, g.id);
        g.balancing_area = t.cell(r, c_ba);
        g.state = t.cell(r, c_state).empty() ? state : t.cell(r, c_state);
        if (g.state != state) {
            throw ValidationError(fmt::format("{}:{}: state '{}' differs from configured state '{}'",
                                              t.source(), t.line_of(r), g.state, state));
        }
        auto tech = parse_technology(t.cell(r, c_tech));
        if (!tech) {
            throw ValidationError(fmt::format("{}:{}: unknown technology '{}'", t.source(),
                                              t.line_of(r), t.cell(r, c_tech)));
        }
        g.technology = *tech;
        auto kind = parse_asset_kind(t.cell(r, c_kind));
        if (!kind) {
            throw ValidationError(fmt::format("{}:{}: unknown kind '{}'", t.source(), t.line_of(r),
                                              t.cell(r, c_kind)));
        }
        g.kind = *kind;
        g.capacity_mw = t.number_or(r, c_cap, 0.0);
        g.variable_cost = t.number_or(r, c_vc, 0.0) +
                          t.number_or(r, c_fuel, 0.0) * t.number_or(r, c_hr, 0.0);
        g.fom_cost = t.number_or(r, c_fom, 0.0) * kPerKw;
        g.ramp_rate = t.number_or(r, c_ramp, 1.0);
        g.max_invest_mw = t.number_or(r, c_max, 0.0);
        g.invest_cost = t.number_or(r, c_inv, 0.0) * kPerKw;
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<StorageAsset> read_storages(const fs::path& dir, const std::string& state) {
    auto t = csv::Table::read(dir / kStoragesFile);
    const auto c_id = t.column("id");
    const auto c_state = t.column("state");
    const auto c_kind = t.column("kind");
    const auto c_dur = t.column("duration_h");
    const auto c_pow = t.column("power_mw");
    const auto c_rte = t.column("rte");
    const auto c_fom = t.column("fom_per_kw_yr");
    const auto c_inv = t.column("invest_cost_per_kw_yr");
    std::vector<StorageAsset> out;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        StorageAsset s;
        s.id = t.cell(r, c_id);
        check_id(t, r, s.id);
        s.state = t.cell(r, c_state).empty() ? state : t.cell(r, c_state);
        if (s.state != state) {
            throw ValidationError(fmt::format("{}:{}: state '{}' differs from configured state '{}'",
                                              t.source(), t.line_of(r), s.state, state));
        }
        auto kind = parse_storage_kind(t.cell(r, c_kind));
        if (!kind) {
            throw ValidationError(fmt::format("{}:{}: unknown storage kind '{}'", t.source(),
                                              t.line_of(r), t.cell(r, c_kind)));
        }
        s.kind = *kind;
        s.duration_h = t.number(r, c_dur);
        // For an sdes_candidate the power column carries the investment cap.
        double power = t.number_or(r, c_pow, 0.0);
        if (s.kind == StorageKind::sdes_candidate) {
            s.max_invest_mw = power;
        } else if (s.existing()) {
            s.power_mw = power;
        }
        s.rte = t.number(r, c_rte);
        s.fom_cost = t.number_or(r, c_fom, 0.0) * kPerKw;
        s.invest_cost = t.number_or(r, c_inv, 0.0) * kPerKw;
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, TimeSeries> read_profiles(const fs::path& dir, int horizon,
                                                const std::vector<GeneratorAsset>& gens) {
    auto t = csv::Table::read(dir / kProfilesFile);
    const auto c_id = t.column("asset_id");
    const auto c_hour = t.column("hour");
    const auto c_cf = t.column("cf");
    std::map<std::string, std::vector<std::pair<long, double>>> raw;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const std::string& id = t.cell(r, c_id);
        long h = t.integer(r, c_hour);
        double cf = t.number(r, c_cf);
        if (!(cf >= 0.0 && cf <= 1.0)) {
            throw ValidationError(fmt::format("{}:{}: capacity factor {} for asset {} outside [0, 1]",
                                              t.source(), t.line_of(r), cf, id));
        }
        if (h < 0 || h >= horizon) {
            throw ValidationError(fmt::format("{}:{}: hour {} for asset {} outside horizon [0, {})",
                                              t.source(), t.line_of(r), h, id, horizon));
        }
        raw[id].emplace_back(h, cf);
    }
    std::map<std::string, TimeSeries> out;
    for (auto& [id, points] : raw) {
        if (static_cast<int>(points.size()) != horizon) {
            throw ValidationError(fmt::format("profile for asset {} has {} hours, horizon is {}", id,
                                              points.size(), horizon));
        }
        TimeSeries series(horizon, 0.0);
        std::vector<bool> seen(horizon, false);
        for (auto [h, cf] : points) {
            if (seen[h]) throw ValidationError(fmt::format("profile for asset {}: duplicate hour {}", id, h));
            seen[h] = true;
            series[h] = cf;
        }
        out.emplace(id, std::move(series));
    }
    for (const auto& g : gens) {
        if (g.intermittent() && !out.count(g.id)) {
            throw ValidationError(fmt::format("intermittent asset without profile: {}", g.id));
        }
    }
    return out;
}

}  // namespace

SystemSpec load_system(const fs::path& input_dir, const RunConfig& config) {
    for (auto name : {kLoadFile, kGeneratorsFile, kStoragesFile, kProfilesFile}) {
        if (!fs::exists(input_dir / name)) {
            throw IoError(fmt::format("missing input file {}", (input_dir / name).string()));
        }
    }
    SystemSpec spec;
    spec.state = config.state;
    spec.horizon_h = config.horizon_h;
    spec.reserve_fraction = config.reserve_fraction;
    spec.penalty_prices = config.penalty_prices;
    spec.hour_weight = config.hour_weight;
    spec.season_calendar = config.calendar();
    spec.load = read_load(input_dir, config.horizon_h);
    spec.generators = read_generators(input_dir, config.state);
    spec.storages = read_storages(input_dir, config.state);
    spec.cf_profiles = read_profiles(input_dir, config.horizon_h, spec.generators);
    validate(spec);
    return spec;
}

void write_system(const SystemSpec& spec, const fs::path& output_dir) {
    using csv::format_number;
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec) throw IoError(fmt::format("cannot create {}: {}", output_dir.string(), ec.message()));

    csv::Writer load({"hour", "load_mw"});
    for (int t = 0; t < spec.horizon_h; ++t) load.add({std::to_string(t), format_number(spec.load[t])});
    load.save(output_dir / kLoadFile);

    csv::Writer gens({"id", "ba", "state", "technology", "capacity_mw", "variable_cost_per_mwh",
                      "fuel_price", "heat_rate", "fom_per_kw_yr", "ramp_frac_per_h", "kind",
                      "max_invest_mw", "invest_cost_per_kw_yr"});
    for (const auto& g : spec.generators) {
        gens.add({g.id, g.balancing_area, g.state, std::string(to_string(g.technology)),
                  format_number(g.capacity_mw), format_number(g.variable_cost), "", "",
                  format_number(g.fom_cost / kPerKw), format_number(g.ramp_rate),
                  std::string(to_string(g.kind)), format_number(g.max_invest_mw),
                  format_number(g.invest_cost / kPerKw)});
    }
    gens.save(output_dir / kGeneratorsFile);

    csv::Writer stor({"id", "state", "kind", "duration_h", "power_mw", "rte", "fom_per_kw_yr",
                      "invest_cost_per_kw_yr"});
    for (const auto& s : spec.storages) {
        double power = s.kind == StorageKind::sdes_candidate ? s.max_invest_mw : s.power_mw;
        stor.add({s.id, s.state, std::string(to_string(s.kind)), format_number(s.duration_h),
                  format_number(power), format_number(s.rte), format_number(s.fom_cost / kPerKw),
                  format_number(s.invest_cost / kPerKw)});
    }
    stor.save(output_dir / kStoragesFile);

    csv::Writer prof({"asset_id", "hour", "cf"});
    for (const auto& [id, series] : spec.cf_profiles) {
        for (std::size_t t = 0; t < series.size(); ++t) {
            prof.add({id, std::to_string(t), format_number(series[t])});
        }
    }
    prof.save(output_dir / kProfilesFile);
}

RunConfig config_for(const SystemSpec& spec) {
    RunConfig c;
    c.state = spec.state;
    c.horizon_h = spec.horizon_h;
    c.reserve_fraction = spec.reserve_fraction;
    c.penalty_prices = spec.penalty_prices;
    c.hour_weight = spec.hour_weight;
    const SeasonCalendar& cal = spec.season_calendar;
    c.winter_start_h = cal.start(Season::winter);
    c.spring_start_h = cal.start(Season::spring);
    c.summer_start_h = cal.start(Season::summer);
    c.fall_start_h = cal.start(Season::fall);
    return c;
}

std::vector<GeneratorAsset> cluster_generators(const std::vector<GeneratorAsset>& gens, int k,
                                               std::uint64_t seed) {
    if (k < 1) throw ArgumentError("cluster_generators: k must be >= 1");
    using GroupKey = std::pair<std::string, Technology>;
    std::vector<GroupKey> order;
    std::map<GroupKey, std::vector<std::size_t>> groups;
    std::vector<GeneratorAsset> out;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const auto& g = gens[i];
        if (g.kind != AssetKind::existing || g.intermittent()) {
            out.push_back(g);
            continue;
        }
        GroupKey key{g.balancing_area, g.technology};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(i);
    }
    for (const auto& key : order) {
        const auto& members = groups[key];
        if (static_cast<int>(members.size()) <= k) {
            for (auto i : members) out.push_back(gens[i]);
            continue;
        }
        std::vector<double> costs;
        for (auto i : members) costs.push_back(gens[i].variable_cost);
        KMeansResult km = kmeans_1d(costs, k, seed);
        for (std::size_t c = 0; c < km.centers.size(); ++c) {
            GeneratorAsset agg;
            agg.id = fmt::format("{}_{}_c{}", key.first, to_string(key.second), c + 1);
            agg.balancing_area = key.first;
            agg.technology = key.second;
            agg.kind = AssetKind::existing;
            double cap = 0.0, vc = 0.0, fom = 0.0, ramp = 0.0;
            double vc_plain = 0.0, fom_plain = 0.0, ramp_plain = 0.0;
            int n = 0;
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (km.labels[j] != static_cast<int>(c)) continue;
                const auto& g = gens[members[j]];
                agg.state = g.state;
                cap += g.capacity_mw;
                vc += g.capacity_mw * g.variable_cost;
                fom += g.capacity_mw * g.fom_cost;
                ramp += g.capacity_mw * g.ramp_rate;
                vc_plain += g.variable_cost;
                fom_plain += g.fom_cost;
                ramp_plain += g.ramp_rate;
                ++n;
            }
            agg.capacity_mw = cap;
            if (cap > 0.0) {
                agg.variable_cost = vc / cap;
                agg.fom_cost = fom / cap;
                agg.ramp_rate = std::min(1.0, ramp / cap);
            } else {
                agg.variable_cost = vc_plain / n;
                agg.fom_cost = fom_plain / n;
                agg.ramp_rate = std::min(1.0, ramp_plain / n);
            }
            out.push_back(std::move(agg));
        }
    }
    return out;
}

SystemSpec build_candidates(const SystemSpec& spec, const CandidateRules& rules) {
    if (spec.expanded()) throw StateError("build_candidates: system already expanded");
    SystemSpec out = spec;
    std::set<std::string> ids;
    for (const auto& g : spec.generators) ids.insert(g.id);
    auto unique_id = [&ids](std::string base) {
        std::string id = base;
        for (int n = 2; ids.count(id); ++n) id = fmt::format("{}_{}", base, n);
        ids.insert(id);
        return id;
    };

    const double mult = rules.multiplier_for(spec.state);
    for (const auto& g : spec.generators) {
        if (g.kind != AssetKind::existing || !g.intermittent()) continue;
        auto cost = rules.ies_invest_cost.find(g.technology);
        if (cost == rules.ies_invest_cost.end()) {
            throw ValidationError(fmt::format("missing config key 'candidates.invest_per_kw_yr.{}'",
                                              to_string(g.technology)));
        }
        GeneratorAsset c = g;
        c.id = unique_id(g.id + "_cand");
        c.kind = AssetKind::candidate;
        c.capacity_mw = 0.0;
        c.max_invest_mw = mult * g.capacity_mw;
        c.invest_cost = cost->second;
        out.cf_profiles[c.id] = spec.profile(g);
        out.generators.push_back(std::move(c));
    }

    std::set<std::string> storage_ids;
    for (const auto& s : spec.storages) storage_ids.insert(s.id);
    auto unique_storage_id = [&storage_ids](std::string base) {
        std::string id = base;
        for (int n = 2; storage_ids.count(id); ++n) id = fmt::format("{}_{}", base, n);
        storage_ids.insert(id);
        return id;
    };
    double sdes_existing = 0.0;
    for (const auto& s : spec.storages) {
        if (s.kind == StorageKind::sdes_existing) sdes_existing += s.power_mw;
    }
    StorageAsset sdes;
    sdes.id = unique_storage_id(spec.state + "_sdes_cand");
    sdes.state = spec.state;
    sdes.kind = StorageKind::sdes_candidate;
    sdes.duration_h = rules.sdes_duration_h;
    sdes.rte = rules.sdes_rte;
    sdes.max_invest_mw = rules.sdes_multiplier * sdes_existing;
    sdes.fom_cost = rules.sdes_fom_cost;
    sdes.invest_cost = rules.sdes_invest_cost;
    out.storages.push_back(sdes);

    StorageAsset ldes;
    ldes.id = unique_storage_id(spec.state + "_ldes");
    ldes.state = spec.state;
    ldes.kind = StorageKind::ldes;
    ldes.duration_h = rules.ldes_duration_h;
    ldes.rte = rules.ldes_rte;
    out.storages.push_back(ldes);

    validate(out);
    return out;
}

SystemSpec prepare_system(const fs::path& input_dir, const RunConfig& config) {
    SystemSpec spec = load_system(input_dir, config);
    if (!spec.expanded()) {
        spec.generators = cluster_generators(spec.generators, config.cluster_k, config.seed);
        spec = build_candidates(spec, config.rules);
    }
    return spec;
}

}  // namespace ldes
