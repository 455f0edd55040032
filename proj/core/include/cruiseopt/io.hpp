#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cruiseopt/scenario.hpp"

namespace cruiseopt {

/**
 * Parses a scenario document. Field names carry their SI unit (xf_m, v0_mps,
 * ...); unknown keys are rejected. The aircraft comes from an inline
 * "aircraft" object when present, otherwise from `aircraft_file` resolved
 * relative to `base_dir`. For a polynomial wind the normalization scales are
 * xf_m, yf_m.
 */
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Inverse of scenario_from_json. With `embed_aircraft` the coefficients are
/// written inline so the document is self-contained.
nlohmann::json scenario_to_json(const Scenario& scenario, bool embed_aircraft = false);

Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json wind_to_json(const WindField& wind);
WindField wind_from_json(const nlohmann::json& doc, double x_scale, double y_scale);

nlohmann::json atmosphere_to_json(const Atmosphere& atm);
Atmosphere atmosphere_from_json(const nlohmann::json& doc);

/// Writes `text` to `path`, throwing Error with the path on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip decimal form, used wherever JSON is serialized
/// deterministically.
std::string dump_json(const nlohmann::json& doc);

}  // namespace cruiseopt
