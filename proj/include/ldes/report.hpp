#pragma once

#include "ldes/analytics.hpp"
#include "ldes/sweep.hpp"

#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>

namespace ldes {

inline constexpr std::string_view kSchemaVersion = "1.0";

nlohmann::json breakdown_json(const ObjectiveBreakdown& b);
nlohmann::json baseline_json(const SystemSpec& spec, const BaselineResult& baseline);
nlohmann::json curve_json(const ViabilityCurve& curve, const BaselineResult& baseline,
                          const ViabilityPoint* without_ldes = nullptr);
nlohmann::json metrics_json(const StateMetrics& m);
nlohmann::json rollup_json(const NationalRollup& r);

std::string curve_csv(const ViabilityCurve& curve);
std::string seasonal_csv(const std::vector<StateMetrics>& metrics);
std::string histogram_csv(const std::vector<HistogramBin>& bins);

// Pretty-printed with a trailing newline. Throws IoError.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, std::string_view text);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ldes
