#include "bvpp/manifest.hpp"

#include "bvpp/csv.hpp"
#include "bvpp/version.hpp"

namespace bvpp {

std::string write_manifest(const std::string& dir, const RunManifest& manifest) {
    nlohmann::json j;
    j["command"] = manifest.command;
    j["config_hash"] = manifest.config_hash;
    j["version"] = manifest.version.empty() ? kToolkitVersion : manifest.version;
    nlohmann::json stages = nlohmann::json::array();
    for (const StageRecord& s : manifest.stages)
        stages.push_back({{"name", s.name}, {"outputs", s.outputs}, {"wall_ms", s.wall_ms}});
    j["stages"] = std::move(stages);
    if (!manifest.extra.is_null()) j["summary"] = manifest.extra;
    const std::string path = dir + "/manifest_" + manifest.command + ".json";
    AtomicFile file(path);
    file.write(j.dump(2));
    file.write("\n");
    file.commit();
    return path;
}

}  // namespace bvpp
