#pragma once

#include <cstdint>
#include <string>

#include "bvpp/config.hpp"
#include "bvpp/manifest.hpp"

namespace bvpp {

struct RunOptions {
    std::string out_dir;  // empty: use the config's output_dir
    int threads = 1;
    bool strict = false;  // escalate warnings to errors
};

// --seed must reach every derived seed (households, clustering) before any
// hashing or generation happens.
void apply_seed_override(ScenarioConfig& config, std::uint64_t seed);

// Each command writes its data files plus manifest_<command>.json and
// returns the manifest. case1/case2 read the artifacts generate wrote.
RunManifest run_generate(const ScenarioConfig& config, const RunOptions& opts);
RunManifest run_case1(const ScenarioConfig& config, const RunOptions& opts);
RunManifest run_case2(const ScenarioConfig& config, const RunOptions& opts);

}  // namespace bvpp
