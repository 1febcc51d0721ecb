#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ldes {

enum class Technology { gas, coal, nuclear, hydro, solar, wind_ons, wind_ofs, other };

inline constexpr std::array<Technology, 8> kAllTechnologies = {
    Technology::gas,   Technology::coal,     Technology::nuclear,  Technology::hydro,
    Technology::solar, Technology::wind_ons, Technology::wind_ofs, Technology::other};

std::string_view to_string(Technology t);
std::optional<Technology> parse_technology(std::string_view s);

// Solar and onshore/offshore wind.
bool is_intermittent(Technology t);
// Gas and coal; the technologies retired in the opportunity model.
bool is_thermal(Technology t);

enum class AssetKind { existing, candidate };

std::string_view to_string(AssetKind k);
std::optional<AssetKind> parse_asset_kind(std::string_view s);

// Costs are held internally per MW: $/MWh for energy, $/MW-yr for fixed and
// (already annualized) investment costs.
struct GeneratorAsset {
    std::string id;
    std::string balancing_area;
    std::string state;
    Technology technology = Technology::other;
    double capacity_mw = 0.0;
    double variable_cost = 0.0;
    double fom_cost = 0.0;
    double ramp_rate = 1.0;
    AssetKind kind = AssetKind::existing;
    double max_invest_mw = 0.0;
    double invest_cost = 0.0;

    bool intermittent() const { return is_intermittent(technology); }
    bool firm() const { return !is_intermittent(technology); }
    bool operator==(const GeneratorAsset&) const = default;
};

enum class StorageKind { sdes_existing, phs, sdes_candidate, ldes };

std::string_view to_string(StorageKind k);
std::optional<StorageKind> parse_storage_kind(std::string_view s);

// Energy capacity is never stored: it is duration_h times the power rating
// (existing), the invested power (sdes_candidate) or the imposed power (ldes).
struct StorageAsset {
    std::string id;
    std::string state;
    StorageKind kind = StorageKind::sdes_existing;
    double duration_h = 4.0;
    double power_mw = 0.0;
    double max_invest_mw = 0.0;
    double rte = 0.85;
    double fom_cost = 0.0;
    double invest_cost = 0.0;

    bool existing() const { return kind == StorageKind::sdes_existing || kind == StorageKind::phs; }
    double energy_mwh() const { return duration_h * power_mw; }
    bool operator==(const StorageAsset&) const = default;
};

using TimeSeries = std::vector<double>;

struct PenaltyPrices {
    double imbalance_shed = 10000.0;        // $/MWh
    double imbalance_surplus = 500.0;       // $/MWh
    double reserve_shortage = 5000.0;       // $/MW per hour
    double reserve_provision_cost = 0.0;    // $/MW per hour
    bool operator==(const PenaltyPrices&) const = default;
};

enum class Season { winter, spring, summer, fall };

inline constexpr std::array<Season, 4> kAllSeasons = {Season::winter, Season::spring,
                                                      Season::summer, Season::fall};

std::string_view to_string(Season s);

// Half-open hour range [begin, end) inside the horizon.
struct HourRange {
    int begin = 0;
    int end = 0;
    int size() const { return end - begin; }
};

// Four season start hours on a circular horizon. Each season runs from its
// start to the next season's start, so the calendar always covers every hour
// exactly once; a season whose range crosses the end of the horizon wraps.
class SeasonCalendar {
public:
    SeasonCalendar() = default;
    SeasonCalendar(int horizon_h, int winter_start, int spring_start, int summer_start,
                   int fall_start);

    // Meteorological seasons (Mar/Jun/Sep/Dec 1st) for an 8760-hour year,
    // scaled proportionally to other horizons.
    static SeasonCalendar meteorological(int horizon_h);

    int horizon() const { return horizon_; }
    int start(Season s) const { return starts_[static_cast<int>(s)]; }
    Season season_of(int hour) const;
    // One range, or two when the season wraps past the end of the horizon.
    std::vector<HourRange> ranges(Season s) const;
    int hours_in(Season s) const;

    bool operator==(const SeasonCalendar&) const = default;

private:
    int horizon_ = 0;
    std::array<int, 4> starts_{};  // indexed by Season
};

// Defaults follow the study setup: 4x IES expansion (10x in CT, DE, PA), 10x
// the existing non-PHS short-duration storage, a 4-h SDES at 85% round trip
// and a 100-h LDES at 42.5%.
struct CandidateRules {
    double ies_multiplier = 4.0;
    std::map<std::string, double> ies_multiplier_overrides{{"CT", 10.0}, {"DE", 10.0}, {"PA", 10.0}};
    double sdes_multiplier = 10.0;
    double sdes_duration_h = 4.0;
    double sdes_rte = 0.85;
    double ldes_duration_h = 100.0;
    double ldes_rte = 0.425;
    // Annualized $/MW-yr for generated IES candidates, keyed by technology.
    std::map<Technology, double> ies_invest_cost;
    double sdes_invest_cost = 0.0;   // $/MW-yr
    double sdes_fom_cost = 0.0;      // $/MW-yr

    double multiplier_for(const std::string& state) const;
    bool operator==(const CandidateRules&) const = default;
};

struct SystemSpec {
    std::string state;
    int horizon_h = 0;
    TimeSeries load;
    std::vector<GeneratorAsset> generators;
    std::vector<StorageAsset> storages;
    std::map<std::string, TimeSeries> cf_profiles;
    double reserve_fraction = 0.04;
    PenaltyPrices penalty_prices;
    SeasonCalendar season_calendar;
    // Multiplies every hourly cost term; 1 means the horizon is the whole
    // study year.
    double hour_weight = 1.0;

    // True once build_candidates has run (an LDES asset is present).
    bool expanded() const;
    const GeneratorAsset* find_generator(std::string_view id) const;
    const StorageAsset* find_storage(std::string_view id) const;
    const TimeSeries& profile(const GeneratorAsset& g) const;
    double thermal_capacity_mw() const;
    double total_load_mwh() const;

    bool operator==(const SystemSpec&) const = default;
};

// Throws ValidationError on the first invariant violation found.
void validate(const SystemSpec& spec);

// Copy with every cost coefficient (asset costs and penalty prices)
// multiplied by factor.
SystemSpec scale_costs(const SystemSpec& spec, double factor);

}  // namespace ldes
