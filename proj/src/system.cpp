#include "ldes/system.hpp"

#include "ldes/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>
#include <set>

namespace ldes {

namespace {

constexpr std::array<std::string_view, 8> kTechnologyNames = {
    "gas", "coal", "nuclear", "hydro", "solar", "wind_ons", "wind_ofs", "other"};
constexpr std::array<std::string_view, 4> kStorageKindNames = {"sdes_existing", "phs",
                                                               "sdes_candidate", "ldes"};
constexpr std::array<std::string_view, 4> kSeasonNames = {"winter", "spring", "summer", "fall"};

// Hour-of-year boundaries of Mar 1, Jun 1, Sep 1 and Dec 1 (non-leap year).
constexpr int kSpringStart8760 = 59 * 24;
constexpr int kSummerStart8760 = 151 * 24;
constexpr int kFallStart8760 = 243 * 24;
constexpr int kWinterStart8760 = 334 * 24;

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view to_string(Technology t) { return kTechnologyNames[static_cast<int>(t)]; }

std::optional<Technology> parse_technology(std::string_view s) {
    for (Technology t : kAllTechnologies) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

bool is_intermittent(Technology t) {
    return t == Technology::solar || t == Technology::wind_ons || t == Technology::wind_ofs;
}

bool is_thermal(Technology t) { return t == Technology::gas || t == Technology::coal; }

std::string_view to_string(AssetKind k) { return k == AssetKind::existing ? "existing" : "candidate"; }

std::optional<AssetKind> parse_asset_kind(std::string_view s) {
    if (s == "existing") return AssetKind::existing;
    if (s == "candidate") return AssetKind::candidate;
    return std::nullopt;
}

std::string_view to_string(StorageKind k) { return kStorageKindNames[static_cast<int>(k)]; }

std::optional<StorageKind> parse_storage_kind(std::string_view s) {
    for (int i = 0; i < 4; ++i) {
        if (kStorageKindNames[i] == s) return static_cast<StorageKind>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Season s) { return kSeasonNames[static_cast<int>(s)]; }

SeasonCalendar::SeasonCalendar(int horizon_h, int winter_start, int spring_start,
                               int summer_start, int fall_start)
    : horizon_(horizon_h), starts_{winter_start, spring_start, summer_start, fall_start} {
    if (horizon_h < 1) throw ValidationError("season calendar: horizon must be positive");
    for (Season s : kAllSeasons) {
        int h = start(s);
        if (h < 0 || h >= horizon_h) {
            throw ValidationError(fmt::format("season calendar: {} start hour {} outside [0, {})",
                                              to_string(s), h, horizon_h));
        }
    }
    // Circular order winter -> spring -> summer -> fall -> winter, measured
    // from the winter start. Equal starts give empty seasons.
    auto offset = [&](Season s) { return (start(s) - winter_start + horizon_h) % horizon_h; };
    if (!(offset(Season::spring) <= offset(Season::summer) &&
          offset(Season::summer) <= offset(Season::fall))) {
        throw ValidationError(
            "season calendar: starts must follow the order winter, spring, summer, fall");
    }
}

SeasonCalendar SeasonCalendar::meteorological(int horizon_h) {
    // Scaled as offsets from the winter start so the order survives rounding.
    auto scaled = [horizon_h](int hours8760) {
        long v = std::lround(static_cast<double>(hours8760) * horizon_h / 8760.0);
        return static_cast<int>(std::clamp<long>(v, 0, horizon_h - 1));
    };
    const int winter = scaled(kWinterStart8760);
    auto start_of = [&](int start8760) {
        return (winter + scaled((start8760 - kWinterStart8760 + 8760) % 8760)) % horizon_h;
    };
    return SeasonCalendar(horizon_h, winter, start_of(kSpringStart8760), start_of(kSummerStart8760),
                          start_of(kFallStart8760));
}

std::vector<HourRange> SeasonCalendar::ranges(Season s) const {
    // Work in offsets from the winter start, where the order is monotone and
    // fall closes the circle at offset horizon_.
    const int origin = start(Season::winter);
    auto offset = [&](Season o) { return (start(o) - origin + horizon_) % horizon_; };
    const int idx = static_cast<int>(s);
    const int begin_off = idx == 0 ? 0 : offset(s);
    const int end_off = idx == 3 ? horizon_ : offset(static_cast<Season>(idx + 1));
    if (end_off <= begin_off) return {};
    const int begin = (origin + begin_off) % horizon_;
    const int len = end_off - begin_off;
    if (begin + len <= horizon_) return {{begin, begin + len}};
    return {{begin, horizon_}, {0, begin + len - horizon_}};
}

int SeasonCalendar::hours_in(Season s) const {
    int n = 0;
    for (const HourRange& r : ranges(s)) n += r.size();
    return n;
}

Season SeasonCalendar::season_of(int hour) const {
    for (Season s : kAllSeasons) {
        for (const HourRange& r : ranges(s)) {
            if (hour >= r.begin && hour < r.end) return s;
        }
    }
    throw ArgumentError(fmt::format("hour {} outside horizon {}", hour, horizon_));
}

double CandidateRules::multiplier_for(const std::string& state) const {
    auto it = ies_multiplier_overrides.find(state);
    return it != ies_multiplier_overrides.end() ? it->second : ies_multiplier;
}

bool SystemSpec::expanded() const {
    return std::any_of(storages.begin(), storages.end(),
                       [](const StorageAsset& s) { return s.kind == StorageKind::ldes; });
}

const GeneratorAsset* SystemSpec::find_generator(std::string_view id) const {
    for (const auto& g : generators) {
        if (g.id == id) return &g;
    }
    return nullptr;
}

const StorageAsset* SystemSpec::find_storage(std::string_view id) const {
    for (const auto& s : storages) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

const TimeSeries& SystemSpec::profile(const GeneratorAsset& g) const {
    auto it = cf_profiles.find(g.id);
    if (it == cf_profiles.end()) {
        throw ValidationError(fmt::format("intermittent asset without profile: {}", g.id));
    }
    return it->second;
}

double SystemSpec::thermal_capacity_mw() const {
    double total = 0.0;
    for (const auto& g : generators) {
        if (g.kind == AssetKind::existing && is_thermal(g.technology)) total += g.capacity_mw;
    }
    return total;
}

double SystemSpec::total_load_mwh() const { return std::accumulate(load.begin(), load.end(), 0.0); }

void validate(const SystemSpec& spec) {
    if (spec.horizon_h < 1) throw ValidationError("horizon_h must be positive");
    if (static_cast<int>(spec.load.size()) != spec.horizon_h) {
        throw ValidationError(fmt::format("load has {} hours, horizon is {}", spec.load.size(),
                                          spec.horizon_h));
    }
    for (std::size_t t = 0; t < spec.load.size(); ++t) {
        if (!finite_nonneg(spec.load[t])) {
            throw ValidationError(fmt::format("load at hour {} must be finite and >= 0", t));
        }
    }
    if (!(spec.reserve_fraction >= 0.0 && spec.reserve_fraction < 1.0)) {
        throw ValidationError("reserve_fraction must lie in [0, 1)");
    }
    const PenaltyPrices& pp = spec.penalty_prices;
    if (!(pp.imbalance_shed > 0 && pp.imbalance_surplus > 0 && pp.reserve_shortage > 0)) {
        throw ValidationError("penalty prices must be > 0");
    }
    if (!finite_nonneg(pp.reserve_provision_cost)) {
        throw ValidationError("reserve provision cost must be >= 0");
    }
    if (!(spec.hour_weight > 0.0 && std::isfinite(spec.hour_weight))) {
        throw ValidationError("hour_weight must be > 0");
    }
    if (spec.season_calendar.horizon() != spec.horizon_h) {
        throw ValidationError("season calendar horizon differs from system horizon");
    }

    std::set<std::string> ids;
    for (const auto& g : spec.generators) {
        if (g.id.empty()) throw ValidationError("generator with empty id");
        if (!ids.insert(g.id).second) {
            throw ValidationError(fmt::format("duplicate generator id: {}", g.id));
        }
        if (!finite_nonneg(g.capacity_mw) || !finite_nonneg(g.variable_cost) ||
            !finite_nonneg(g.fom_cost) || !finite_nonneg(g.max_invest_mw) ||
            !finite_nonneg(g.invest_cost)) {
            throw ValidationError(fmt::format("generator {}: negative or non-finite field", g.id));
        }
        if (!(g.ramp_rate > 0.0 && g.ramp_rate <= 1.0)) {
            throw ValidationError(fmt::format("generator {}: ramp rate must be in (0, 1]", g.id));
        }
        if (g.kind == AssetKind::existing && (g.max_invest_mw != 0.0 || g.invest_cost != 0.0)) {
            throw ValidationError(
                fmt::format("generator {}: existing asset with investment data", g.id));
        }
        if (g.kind == AssetKind::candidate && g.capacity_mw != 0.0) {
            throw ValidationError(fmt::format("generator {}: candidate with capacity_mw != 0", g.id));
        }
        bool has_profile = spec.cf_profiles.count(g.id) > 0;
        if (g.intermittent() && !has_profile) {
            throw ValidationError(fmt::format("intermittent asset without profile: {}", g.id));
        }
        if (!g.intermittent() && has_profile) {
            throw ValidationError(fmt::format("non-intermittent asset with profile: {}", g.id));
        }
    }
    for (const auto& [id, series] : spec.cf_profiles) {
        if (!ids.count(id)) throw ValidationError(fmt::format("profile for unknown asset: {}", id));
        if (static_cast<int>(series.size()) != spec.horizon_h) {
            throw ValidationError(fmt::format("profile for asset {} has {} hours, horizon is {}",
                                              id, series.size(), spec.horizon_h));
        }
        for (std::size_t t = 0; t < series.size(); ++t) {
            if (!(series[t] >= 0.0 && series[t] <= 1.0)) {
                throw ValidationError(
                    fmt::format("profile for asset {}: capacity factor {} at hour {} outside [0, 1]",
                                id, series[t], t));
            }
        }
    }

    std::set<std::string> storage_ids;
    int ldes_count = 0;
    for (const auto& s : spec.storages) {
        if (s.id.empty()) throw ValidationError("storage with empty id");
        if (!storage_ids.insert(s.id).second) {
            throw ValidationError(fmt::format("duplicate storage id: {}", s.id));
        }
        if (!(s.duration_h > 0.0 && std::isfinite(s.duration_h))) {
            throw ValidationError(fmt::format("storage {}: duration_h must be > 0", s.id));
        }
        if (!(s.rte > 0.0 && s.rte <= 1.0)) {
            throw ValidationError(fmt::format("storage {}: rte must be in (0, 1]", s.id));
        }
        if (!finite_nonneg(s.power_mw) || !finite_nonneg(s.max_invest_mw) ||
            !finite_nonneg(s.fom_cost) || !finite_nonneg(s.invest_cost)) {
            throw ValidationError(fmt::format("storage {}: negative or non-finite field", s.id));
        }
        if (s.existing() && s.max_invest_mw != 0.0) {
            throw ValidationError(fmt::format("storage {}: existing asset with max_invest_mw", s.id));
        }
        if (!s.existing() && s.power_mw != 0.0) {
            throw ValidationError(
                fmt::format("storage {}: candidate power is a decision, power_mw must be 0", s.id));
        }
        if (s.kind == StorageKind::ldes) ++ldes_count;
    }
    if (ldes_count > 1) throw ValidationError("at most one ldes asset per state");
}

SystemSpec scale_costs(const SystemSpec& spec, double factor) {
    SystemSpec out = spec;
    for (auto& g : out.generators) {
        g.variable_cost *= factor;
        g.fom_cost *= factor;
        g.invest_cost *= factor;
    }
    for (auto& s : out.storages) {
        s.fom_cost *= factor;
        s.invest_cost *= factor;
    }
    out.penalty_prices.imbalance_shed *= factor;
    out.penalty_prices.imbalance_surplus *= factor;
    out.penalty_prices.reserve_shortage *= factor;
    out.penalty_prices.reserve_provision_cost *= factor;
    return out;
}

}  // namespace ldes
