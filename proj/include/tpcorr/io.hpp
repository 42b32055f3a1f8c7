#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "tpcorr/analytics.hpp"
#include "tpcorr/moments.hpp"
#include "tpcorr/montecarlo.hpp"

namespace tpcorr {

// Population CSV: header `y,x,z`, then one row of three decimals per unit.
// Errors carry the 1-based line number.
[[nodiscard]] PopulationFrame parse_population_csv(std::istream& in);
[[nodiscard]] PopulationFrame load_population_csv(const std::filesystem::path& path);

// Flat JSON object of numbers. An object nested under "parameters" (the
// shape `tpcorr moments` emits) is accepted as well.
[[nodiscard]] ParamDocument parse_params_json(std::string_view text);
[[nodiscard]] ParamDocument load_params_json(const std::filesystem::path& path);

inline constexpr int kReportSchema = 1;

[[nodiscard]] nlohmann::json to_json(const MomentSet& moments);
[[nodiscard]] nlohmann::json to_json(const VarianceReport& report);
[[nodiscard]] nlohmann::json to_json(const SimulationResult& result);
[[nodiscard]] nlohmann::json to_json(const ExactResult& result);

// Sorted keys, two-space indent, floating-point values with 12 significant
// digits and non-finite values as null. Output ends with a newline.
[[nodiscard]] std::string dump_canonical(const nlohmann::json& value);

}  // namespace tpcorr
