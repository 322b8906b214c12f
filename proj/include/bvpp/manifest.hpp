#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace bvpp {

// Record of one pipeline stage: what it wrote and how long it took. The
// wall-clock field is the one part of a run that legitimately differs
// between byte-identical reruns, which is why it lives here and not in the
// data files.
struct StageRecord {
    std::string name;
    std::vector<std::string> outputs;  // paths relative to the output dir
    double wall_ms = 0.0;
};

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string version;
    std::vector<StageRecord> stages;
    nlohmann::json extra;  // command-specific summary (e.g. campaign totals)
};

// Writes manifest_<command>.json inside `dir`.
std::string write_manifest(const std::string& dir, const RunManifest& manifest);

}  // namespace bvpp
