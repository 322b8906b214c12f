#include "bvpp/appliance.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>

namespace bvpp {

std::string canonical_appliance_name(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char ch : name) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    }
    // singularize: "tvs" -> "tv", "ovens" -> "oven"
    if (out.size() > 1 && out.back() == 's' && out[out.size() - 2] != 's') out.pop_back();
    return out;
}

ApplianceCategory classify_appliance(const std::string& name) {
    static const std::map<std::string, ApplianceCategory> table = {
        {"washingmachine", ApplianceCategory::Shiftable},
        {"clothesdryer", ApplianceCategory::Shiftable},
        {"dishwasher", ApplianceCategory::Shiftable},
        {"poolpump", ApplianceCategory::Shiftable},
        {"oven", ApplianceCategory::Shiftable},
        {"light", ApplianceCategory::NonShiftable},
        {"tv", ApplianceCategory::NonShiftable},
        {"cookingstove", ApplianceCategory::NonShiftable},
        {"computer", ApplianceCategory::NonShiftable},
        {"waterheater", ApplianceCategory::NonShiftable},
    };
    auto it = table.find(canonical_appliance_name(name));
    if (it == table.end())
        throw UnknownAppliance("unknown appliance name '" + name +
                               "'; supply the category explicitly in the config");
    return it->second;
}

bool run_hits_curfew(int start, int duration, const std::vector<int>& curfew) {
    for (int t : curfew)
        if (t >= start && t < start + duration) return true;
    return false;
}

std::vector<int> feasible_starts(const ApplianceSpec& spec) {
    std::vector<int> out;
    for (int s = spec.earliest_start; s <= spec.latest_start; ++s)
        if (!run_hits_curfew(s, spec.duration, spec.curfew)) out.push_back(s);
    return out;
}

int nearest_feasible_start(const ApplianceSpec& spec, int desired) {
    const std::vector<int> starts = feasible_starts(spec);
    if (starts.empty())
        throw InfeasibleWindow("appliance '" + spec.id +
                               "': allowed window is entirely inside the curfew");
    int best = starts.front();
    int best_dist = std::abs(best - desired);
    for (int s : starts) {
        int d = std::abs(s - desired);
        if (d < best_dist) {  // ties keep the earlier start
            best = s;
            best_dist = d;
        }
    }
    return best;
}

void validate(const ApplianceSpec& spec, int intervals_per_day) {
    const std::string where = "appliance '" + spec.id + "': ";
    if (spec.id.empty()) throw ConfigError("appliance with empty id");
    if (spec.rated_power_kw <= 0.0) throw ConfigError(where + "rated_power_kw must be > 0");
    if (spec.duration < 1) throw ConfigError(where + "duration must be >= 1");
    if (spec.earliest_start < 0 || spec.latest_start < spec.earliest_start)
        throw ConfigError(where + "allowed window is empty or negative");
    if (spec.latest_start + spec.duration > intervals_per_day)
        throw ConfigError(where + "run does not fit inside one day");
    if (spec.preferred_start < spec.earliest_start || spec.preferred_start > spec.latest_start)
        throw ConfigError(where + "preferred_start outside the allowed window");
    if (spec.category == ApplianceCategory::NonShiftable &&
        (spec.earliest_start != spec.preferred_start || spec.latest_start != spec.preferred_start))
        throw ConfigError(where + "non-shiftable appliances must have a single-start window");
    for (int t : spec.curfew)
        if (t < 0 || t >= intervals_per_day)
            throw ConfigError(where + "curfew interval out of range");
}

}  // namespace bvpp
