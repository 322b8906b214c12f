#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bvpp/bess.hpp"
#include "bvpp/fcm.hpp"
#include "bvpp/household.hpp"
#include "bvpp/recommender.hpp"
#include "bvpp/tariffs.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

// One fleet block expands into `count` identical households with distinct
// ids and seeds.
struct FleetBlock {
    std::string id_prefix;
    int count = 0;
    double solar_capacity_kw = 0.0;
    std::vector<HouseholdAppliance> appliances;
};

// Fully validated scenario; every downstream module receives only values
// that already passed their own validators.
struct ScenarioConfig {
    TimeGrid grid;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    TariffSet tariffs;                      // tiled to the full horizon
    std::vector<double> solar_coefficients;  // tiled to the full horizon
    std::optional<BessSpec> bess;
    int soc_levels = 201;
    long enumeration_limit = 1'000'000;
    FcmParams fcm;  // seed mirrors the global seed
    FlagParams flagging;
    int top_n = 2;
    std::vector<FleetBlock> fleet;
};

// Parses and validates; throws ConfigError with a field path on any problem.
ScenarioConfig load_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config(const nlohmann::json& root, const std::string& origin);

std::vector<HouseholdModel> expand_fleet(const ScenarioConfig& config);

// Canonical resolved form (defaults materialized, series tiled, output_dir
// excluded) — the hash input, so every semantic field lands here.
nlohmann::json to_effective_json(const ScenarioConfig& config);
std::string config_hash_hex(const ScenarioConfig& config);

}  // namespace bvpp
