#pragma once

// Seeded synthetic generator: maps per-appliance lifestyles onto physical
// appliance runs to produce household load profiles plus rooftop solar.
// Generation is a pure function of (model, grid): every (appliance, day)
// has its own counter-based random stream derived from the household seed.

#include <map>
#include <string>
#include <vector>

#include "bvpp/household.hpp"
#include "bvpp/load_profile.hpp"

namespace bvpp {

// One appliance-day: whether it ran and at which intraday interval.
struct ApplianceDayRun {
    bool active = false;
    int start = 0;
};

// appliance id -> one entry per day
using HouseholdRuns = std::map<std::string, std::vector<ApplianceDayRun>>;

// Draw activations and jittered starts for every appliance-day.
// Starts are clamped to the allowed window and moved off the curfew;
// throws InfeasibleWindow when an appliance has no feasible start at all.
HouseholdRuns simulate_household_runs(const HouseholdModel& model, const TimeGrid& grid);

LoadProfile render_appliance_profile(const ApplianceSpec& spec,
                                     const std::vector<ApplianceDayRun>& runs,
                                     const TimeGrid& grid);

std::map<std::string, LoadProfile> render_profiles(const HouseholdModel& model,
                                                   const HouseholdRuns& runs,
                                                   const TimeGrid& grid);

// Convenience: runs + rendering in one call.
std::map<std::string, LoadProfile> simulate_household(const HouseholdModel& model,
                                                      const TimeGrid& grid);

// Element-wise sum of per-appliance profiles.
LoadProfile total_consumption(const std::map<std::string, LoadProfile>& profiles,
                              const TimeGrid& grid);

// values[t] = capacity * coefficients[t]; coefficients must cover the whole
// grid and lie in [0, 1].
LoadProfile solar_profile(double capacity_kw, const std::vector<double>& coefficients,
                          const TimeGrid& grid);

}  // namespace bvpp
