#include "bvpp/profile_gen.hpp"

#include <cmath>
#include <set>

#include "bvpp/rng.hpp"

namespace bvpp {

void validate(const HouseholdModel& model, const TimeGrid& grid) {
    if (model.id.empty()) throw ConfigError("household with empty id");
    const std::string where = "household '" + model.id + "': ";
    if (model.solar_capacity_kw < 0.0)
        throw ConfigError(where + "solar_capacity_kw must be >= 0");
    std::set<std::string> ids;
    for (const HouseholdAppliance& a : model.appliances) {
        validate(a.spec, grid.intervals_per_day);
        if (!ids.insert(a.spec.id).second)
            throw ConfigError(where + "duplicate appliance id '" + a.spec.id + "'");
        if (a.lifestyle.activation_probability < 0.0 || a.lifestyle.activation_probability > 1.0)
            throw ConfigError(where + "appliance '" + a.spec.id +
                              "': activation_probability must be in [0,1]");
        if (a.lifestyle.jitter_stddev < 0.0)
            throw ConfigError(where + "appliance '" + a.spec.id +
                              "': jitter_stddev must be >= 0");
    }
}

HouseholdRuns simulate_household_runs(const HouseholdModel& model, const TimeGrid& grid) {
    validate(model, grid);
    HouseholdRuns runs;
    for (const HouseholdAppliance& app : model.appliances) {
        const ApplianceSpec& spec = app.spec;
        const std::vector<int> starts = feasible_starts(spec);
        if (starts.empty())
            throw InfeasibleWindow("household '" + model.id + "', appliance '" + spec.id +
                                   "': allowed window is entirely inside the curfew");
        std::vector<ApplianceDayRun>& days = runs[spec.id];
        days.resize(static_cast<std::size_t>(grid.num_days));
        const std::uint64_t app_hash = fnv1a64(spec.id);
        for (int d = 0; d < grid.num_days; ++d) {
            CounterRng rng(stream_key(model.seed, "appliance-day", app_hash,
                                      static_cast<std::uint64_t>(d)));
            ApplianceDayRun& run = days[static_cast<std::size_t>(d)];
            run.active = rng.next_double() < app.lifestyle.activation_probability;
            if (!run.active) continue;
            int desired = spec.preferred_start;
            if (app.lifestyle.jitter_stddev > 0.0 && spec.earliest_start != spec.latest_start) {
                const double jitter = rng.next_gaussian() * app.lifestyle.jitter_stddev;
                desired += static_cast<int>(std::llround(jitter));
                if (desired < spec.earliest_start) desired = spec.earliest_start;
                if (desired > spec.latest_start) desired = spec.latest_start;
            }
            run.start = nearest_feasible_start(spec, desired);
        }
    }
    return runs;
}

LoadProfile render_appliance_profile(const ApplianceSpec& spec,
                                     const std::vector<ApplianceDayRun>& runs,
                                     const TimeGrid& grid) {
    LoadProfile profile = make_profile(grid);
    for (int d = 0; d < grid.num_days; ++d) {
        const ApplianceDayRun& run = runs[static_cast<std::size_t>(d)];
        if (!run.active) continue;
        const int base = d * grid.intervals_per_day + run.start;
        for (int k = 0; k < spec.duration; ++k)
            profile.values[static_cast<std::size_t>(base + k)] += spec.rated_power_kw;
    }
    return profile;
}

std::map<std::string, LoadProfile> render_profiles(const HouseholdModel& model,
                                                   const HouseholdRuns& runs,
                                                   const TimeGrid& grid) {
    std::map<std::string, LoadProfile> profiles;
    for (const HouseholdAppliance& app : model.appliances) {
        auto it = runs.find(app.spec.id);
        if (it == runs.end())
            throw Error("render_profiles: no runs for appliance '" + app.spec.id + "'");
        profiles.emplace(app.spec.id, render_appliance_profile(app.spec, it->second, grid));
    }
    return profiles;
}

std::map<std::string, LoadProfile> simulate_household(const HouseholdModel& model,
                                                      const TimeGrid& grid) {
    return render_profiles(model, simulate_household_runs(model, grid), grid);
}

LoadProfile total_consumption(const std::map<std::string, LoadProfile>& profiles,
                              const TimeGrid& grid) {
    LoadProfile total = make_profile(grid);
    for (const auto& [id, p] : profiles) {
        check_same_grid(p.grid, grid, "total_consumption('" + id + "')");
        for (std::size_t t = 0; t < total.values.size(); ++t) total.values[t] += p.values[t];
    }
    return total;
}

LoadProfile solar_profile(double capacity_kw, const std::vector<double>& coefficients,
                          const TimeGrid& grid) {
    if (capacity_kw < 0.0) throw CoefficientOutOfRange("solar capacity must be >= 0");
    if (static_cast<int>(coefficients.size()) != grid.length())
        throw LengthMismatch("solar coefficients: expected " + std::to_string(grid.length()) +
                             " values, got " + std::to_string(coefficients.size()));
    LoadProfile profile = make_profile(grid);
    for (std::size_t t = 0; t < coefficients.size(); ++t) {
        const double c = coefficients[t];
        if (c < 0.0 || c > 1.0)
            throw CoefficientOutOfRange("solar coefficient at interval " + std::to_string(t) +
                                        " is outside [0,1]");
        profile.values[t] = capacity_kw * c;
    }
    return profile;
}

}  // namespace bvpp
