#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bvpp/household.hpp"
#include "bvpp/load_profile.hpp"
#include "bvpp/profile_gen.hpp"
#include "bvpp/tariffs.hpp"

namespace bvpp {

// Per-household usage summary over the full horizon.
struct HouseholdFeatures {
    double avg_daily_energy_kwh = 0.0;
    double avg_daily_cost = 0.0;  // $/day, TOU on gross consumption
};

HouseholdFeatures compute_features(const LoadProfile& consumption,
                                   const std::vector<double>& tou_per_kwh);

// Residual split inside one hard cluster: fit cost-vs-energy least squares
// and flag residuals above k standard deviations. Constant-energy groups
// fall back to a median + k*MAD rule on cost; groups smaller than 4 yield
// no flags.
struct FlagParams {
    double k = 1.0;
};

std::set<std::string> flag_inefficient(const std::map<std::string, HouseholdFeatures>& group,
                                       const FlagParams& params = {});

// 1 / (1 + RMSD) between two mean-day profiles; 1 iff identical.
double lifestyle_similarity(const std::vector<double>& mean_day_a,
                            const std::vector<double>& mean_day_b);

// Everything the rating pipeline needs to know about one household.
struct HouseholdData {
    std::string id;
    const HouseholdModel* model = nullptr;
    const HouseholdRuns* runs = nullptr;
    std::vector<double> mean_day_nonshiftable_kw;
    double current_cost = 0.0;  // $ over the horizon, TOU on gross consumption
};

// Intraday average of the household's non-shiftable consumption.
std::vector<double> nonshiftable_mean_day(const HouseholdModel& model, const HouseholdRuns& runs,
                                          const TimeGrid& grid);

// $ over the horizon at the TOU rate (no export side; gross consumption).
double gross_tou_cost(const LoadProfile& consumption, const std::vector<double>& tou_per_kwh);

// One shiftable start per appliance, collapsed from observed runs by the
// lower median.
std::map<std::string, int> peer_plan(const HouseholdModel& model, const HouseholdRuns& runs);

struct Recommendation {
    std::string peer_id;
    double rating = 0.0;            // similarity x saving, ranking only
    double projected_saving = 0.0;  // $ over the horizon, > 0 when emitted
    std::map<std::string, int> plan;  // appliance -> start actually applied
};

// Re-run the target's own appliances under each peer's timing, score by
// similarity x saving, and return the top N (ties by peer id ascending).
// Returns an empty list when no peer yields a positive saving.
std::vector<Recommendation> recommend(const HouseholdData& target,
                                      const std::vector<const HouseholdData*>& peers,
                                      const std::vector<double>& tou_per_kwh,
                                      const TimeGrid& grid, int top_n);

struct CampaignSummary {
    double total_saving = 0.0;
    double mean_saving = 0.0;  // 0 when no target received a recommendation
    int targets_with_recommendation = 0;
};

// Sum of each target's top-1 projected saving.
CampaignSummary campaign_savings(
    const std::map<std::string, std::vector<Recommendation>>& by_target);

}  // namespace bvpp
