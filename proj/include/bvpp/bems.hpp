#pragma once

// Per-building energy management: shift shiftable appliance runs inside
// their allowed windows to minimize f = c_tou - r_fi, then report the
// building's net load. The aggregation layer above only ever sees tariffs
// in and net loads out; it never touches appliances directly.

#include <map>
#include <string>

#include "bvpp/load_profile.hpp"
#include "bvpp/profile_gen.hpp"
#include "bvpp/tariffs.hpp"

namespace bvpp {

// Energy bill decomposition: grid import cost, feed-in revenue, objective.
struct CostBreakdown {
    double c_tou = 0.0;  // $
    double r_fi = 0.0;   // $
    double f = 0.0;      // c_tou - r_fi
};

// Start interval per shiftable appliance per active day.
struct Schedule {
    std::map<std::string, std::map<int, int>> starts;  // appliance -> day -> start
};

// Import/export netted per interval: g = max(c-s,0), x = max(s-c,0);
// c_tou = sum tou*g*dh, r_fi = sum fit*x*dh.
CostBreakdown cost_breakdown(const LoadProfile& consumption, const LoadProfile& solar,
                             const TariffSet& tariffs);

// consumption - solar, elementwise; negative values are surplus.
NetLoadProfile net_load(const LoadProfile& consumption, const LoadProfile& solar);

// The as-generated timing of every active shiftable appliance.
Schedule default_schedule(const HouseholdModel& model, const HouseholdRuns& runs);

// Replace shiftable active-day starts with the schedule's choices.
HouseholdRuns apply_schedule(const HouseholdModel& model, const HouseholdRuns& runs,
                             const Schedule& schedule);

struct ScheduleResult {
    Schedule schedule;
    CostBreakdown cost;      // of the optimized schedule, over the whole horizon
    CostBreakdown default_cost;
};

// Each day is optimized independently. When the cross-product of candidate
// starts for that day is at most `enumeration_limit` the optimum is exact
// (full enumeration, ties broken toward the lexicographically smallest
// schedule in appliance-id/start order); otherwise coordinate descent from
// the as-generated starts, cycling appliances in id order, runs to a fixed
// point. Either way f never exceeds the default schedule's f.
ScheduleResult optimize_schedule(const HouseholdModel& model, const HouseholdRuns& activations,
                                 const LoadProfile& solar, const TariffSet& tariffs,
                                 const TimeGrid& grid,
                                 long long enumeration_limit = 1'000'000);

}  // namespace bvpp
