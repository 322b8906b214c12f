#pragma once

#include <string>
#include <vector>

#include "bvpp/errors.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

enum class ApplianceCategory { Shiftable, NonShiftable };

inline const char* to_string(ApplianceCategory c) {
    return c == ApplianceCategory::Shiftable ? "shiftable" : "non_shiftable";
}

// One appliance: physics (power, run length) plus placement constraints.
// All interval indices are intraday, 0 .. intervals_per_day-1. A run started
// at s occupies [s, s+duration) on one day.
struct ApplianceSpec {
    std::string id;
    std::string name;
    double rated_power_kw = 0.0;
    int duration = 1;  // intervals per run
    ApplianceCategory category = ApplianceCategory::NonShiftable;
    int earliest_start = 0;  // allowed window, inclusive
    int latest_start = 0;
    int preferred_start = 0;
    std::vector<int> curfew;  // intraday intervals where operation is forbidden
};

// Category lookup for the built-in appliance names. Matching is
// case-insensitive and ignores spacing, hyphens and a plural 's'.
// Throws UnknownAppliance for anything else.
ApplianceCategory classify_appliance(const std::string& name);

// Lowercased, alphanumeric-only, singularized form used for classification.
std::string canonical_appliance_name(const std::string& name);

bool run_hits_curfew(int start, int duration, const std::vector<int>& curfew);

// All starts in the allowed window whose run avoids the curfew, ascending.
std::vector<int> feasible_starts(const ApplianceSpec& spec);

// Feasible start closest to `desired` (ties go to the earlier start).
// Throws InfeasibleWindow when the window is entirely blocked.
int nearest_feasible_start(const ApplianceSpec& spec, int desired);

void validate(const ApplianceSpec& spec, int intervals_per_day);

}  // namespace bvpp
