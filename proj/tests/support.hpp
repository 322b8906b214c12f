#pragma once

// Shared helpers for unit and acceptance tests: random instance builders and
// independent brute-force oracles that the library implementations are
// checked against.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "bvpp/appliance.hpp"
#include "bvpp/bems.hpp"
#include "bvpp/bess.hpp"
#include "bvpp/household.hpp"
#include "bvpp/profile_gen.hpp"
#include "bvpp/rng.hpp"
#include "bvpp/tariffs.hpp"
#include "bvpp/time_grid.hpp"

namespace testsup {

inline bvpp::TimeGrid hourly(int days = 1) { return bvpp::make_grid(60, days); }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("bvpp_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

// ---- scheduling oracle -----------------------------------------------------

// Mirrors the scheduler's published cost arithmetic (per-interval accumulation
// in time order) but enumerates by recursion rather than an odometer.
inline double oracle_day_cost(const std::vector<double>& cons, const double* solar,
                              const double* tou, const double* fit, int t_day, double dh) {
    double f = 0.0;
    for (int t = 0; t < t_day; ++t) {
        const double net = cons[static_cast<std::size_t>(t)] - solar[t];
        if (net >= 0.0)
            f += tou[t] * net * dh;
        else
            f -= fit[t] * (-net) * dh;
    }
    return f;
}

struct OracleItem {
    const bvpp::ApplianceSpec* spec;
    std::vector<int> candidates;
};

// At each leaf the consumption vector is rebuilt from the base, so a leaf's
// cost never carries rounding left over from a sibling combination.
inline void oracle_enumerate(std::vector<OracleItem>& items, std::size_t pos,
                             const std::vector<double>& base, std::vector<int>& current,
                             std::vector<int>& best, double& best_f, bool& first,
                             const double* solar, const double* tou, const double* fit,
                             int t_day, double dh) {
    if (pos == items.size()) {
        std::vector<double> cons(base);
        for (std::size_t i = 0; i < items.size(); ++i) {
            const bvpp::ApplianceSpec& spec = *items[i].spec;
            for (int k = 0; k < spec.duration; ++k)
                cons[static_cast<std::size_t>(current[i] + k)] += spec.rated_power_kw;
        }
        const double f = oracle_day_cost(cons, solar, tou, fit, t_day, dh);
        if (first || f < best_f) {
            best_f = f;
            best = current;
            first = false;
        }
        return;
    }
    for (int start : items[pos].candidates) {
        current[pos] = start;
        oracle_enumerate(items, pos + 1, base, current, best, best_f, first, solar, tou, fit,
                         t_day, dh);
    }
}

// Exhaustive day-by-day optimum over active shiftable appliances; ties land
// on the lexicographically smallest (appliance id, start) choice because the
// recursion visits candidates in that order and keeps strict improvements.
inline bvpp::Schedule oracle_schedule(const bvpp::HouseholdModel& model,
                                      const bvpp::HouseholdRuns& activations,
                                      const bvpp::LoadProfile& solar,
                                      const bvpp::TariffSet& tariffs,
                                      const bvpp::TimeGrid& grid) {
    std::vector<const bvpp::HouseholdAppliance*> shiftable;
    for (const bvpp::HouseholdAppliance& app : model.appliances)
        if (app.spec.category == bvpp::ApplianceCategory::Shiftable) shiftable.push_back(&app);
    std::sort(shiftable.begin(), shiftable.end(),
              [](const bvpp::HouseholdAppliance* a, const bvpp::HouseholdAppliance* b) {
                  return a->spec.id < b->spec.id;
              });

    const int t_day = grid.intervals_per_day;
    const double dh = grid.delta_hours();
    bvpp::Schedule schedule;
    for (int d = 0; d < grid.num_days; ++d) {
        const std::size_t off = static_cast<std::size_t>(d) * static_cast<std::size_t>(t_day);
        std::vector<double> base(static_cast<std::size_t>(t_day), 0.0);
        for (const bvpp::HouseholdAppliance& app : model.appliances) {
            if (app.spec.category == bvpp::ApplianceCategory::Shiftable) continue;
            const bvpp::ApplianceDayRun& run =
                activations.at(app.spec.id).at(static_cast<std::size_t>(d));
            if (!run.active) continue;
            for (int k = 0; k < app.spec.duration; ++k)
                base[static_cast<std::size_t>(run.start + k)] += app.spec.rated_power_kw;
        }
        std::vector<OracleItem> items;
        for (const bvpp::HouseholdAppliance* app : shiftable) {
            const bvpp::ApplianceDayRun& run =
                activations.at(app->spec.id).at(static_cast<std::size_t>(d));
            if (!run.active) continue;
            items.push_back({&app->spec, bvpp::feasible_starts(app->spec)});
        }
        if (items.empty()) continue;
        std::vector<int> current(items.size(), 0);
        std::vector<int> best(items.size(), 0);
        double best_f = 0.0;
        bool first = true;
        oracle_enumerate(items, 0, base, current, best, best_f, first,
                         solar.values.data() + off, tariffs.tou.data() + off,
                         tariffs.fit.data() + off, t_day, dh);
        for (std::size_t i = 0; i < items.size(); ++i)
            schedule.starts[items[i].spec->id][d] = best[i];
    }
    return schedule;
}

// Random single-day instance: up to `max_shiftable` shiftable appliances with
// at most `max_candidates` feasible starts each, plus some fixed base load.
struct SchedulerInstance {
    bvpp::HouseholdModel model;
    bvpp::HouseholdRuns activations;
    bvpp::LoadProfile solar;
    bvpp::TariffSet tariffs;
    bvpp::TimeGrid grid;
};

inline SchedulerInstance random_scheduler_instance(std::uint64_t seed, int max_shiftable = 3,
                                                   int max_candidates = 8, int days = 1) {
    bvpp::CounterRng rng(bvpp::stream_key(seed, "sched-instance", 0, 0));
    SchedulerInstance inst;
    inst.grid = hourly(days);
    inst.model.id = "t" + std::to_string(seed);
    inst.model.seed = seed;

    const int n_nonshift = rng.next_int(1, 2);
    for (int i = 0; i < n_nonshift; ++i) {
        bvpp::ApplianceSpec spec;
        spec.id = "base" + std::to_string(i);
        spec.name = i == 0 ? "light" : "tv";
        spec.category = bvpp::ApplianceCategory::NonShiftable;
        spec.rated_power_kw = rng.next_uniform(0.2, 2.0);
        spec.duration = rng.next_int(1, 4);
        spec.preferred_start = rng.next_int(0, 24 - spec.duration);
        spec.earliest_start = spec.latest_start = spec.preferred_start;
        bvpp::Lifestyle life{1.0, 0.0};
        inst.model.appliances.push_back({spec, life});
    }
    const int n_shift = rng.next_int(1, max_shiftable);
    for (int i = 0; i < n_shift; ++i) {
        bvpp::ApplianceSpec spec;
        spec.id = "shift" + std::to_string(i);
        spec.name = "washing machine";
        spec.category = bvpp::ApplianceCategory::Shiftable;
        spec.rated_power_kw = rng.next_uniform(0.5, 3.0);
        spec.duration = rng.next_int(1, 3);
        const int window = rng.next_int(2, max_candidates);
        spec.earliest_start = rng.next_int(0, 24 - spec.duration - (window - 1));
        spec.latest_start = spec.earliest_start + (window - 1);
        spec.preferred_start = spec.earliest_start + rng.next_int(0, window - 1);
        bvpp::Lifestyle life{1.0, 0.0};
        inst.model.appliances.push_back({spec, life});
    }

    inst.solar = bvpp::make_profile(inst.grid);
    for (double& v : inst.solar.values) v = rng.next_uniform(0.0, 1.5);
    const std::size_t len = static_cast<std::size_t>(inst.grid.length());
    inst.tariffs.tou.resize(len);
    inst.tariffs.fit.resize(len);
    inst.tariffs.market_price.resize(len);
    for (std::size_t t = 0; t < len; ++t) {
        inst.tariffs.tou[t] = rng.next_uniform(0.05, 0.6);
        inst.tariffs.market_price[t] = rng.next_uniform(0.1, 0.5);
        inst.tariffs.fit[t] = inst.tariffs.market_price[t] * rng.next_uniform(0.2, 0.9);
    }

    for (const bvpp::HouseholdAppliance& app : inst.model.appliances) {
        std::vector<bvpp::ApplianceDayRun>& days_vec = inst.activations[app.spec.id];
        days_vec.resize(static_cast<std::size_t>(inst.grid.num_days));
        for (auto& run : days_vec) {
            run.active = rng.next_double() < 0.85;
            run.start = app.spec.category == bvpp::ApplianceCategory::Shiftable
                            ? app.spec.earliest_start +
                                  rng.next_int(0, app.spec.latest_start - app.spec.earliest_start)
                            : app.spec.preferred_start;
        }
    }
    return inst;
}

// ---- battery oracle --------------------------------------------------------

// Depth-first search over every SOC-lattice action sequence, mirroring the
// DP's transition arithmetic (same feasibility tolerance, same revenue
// accumulation order along the path).
inline bool oracle_bess_transition(double from, double to, double surplus, const bvpp::BessSpec& b,
                                   double dh, double& quantity) {
    const double tol = 1e-9;
    const double delta = to - from;
    if (delta > tol) {
        const double charge = delta / (b.eta_c * dh);
        if (charge > b.max_charge_kw + tol) return false;
        if (charge > surplus + tol) return false;
        quantity = (surplus - charge) * dh;
        if (quantity < 0.0) quantity = 0.0;
    } else if (delta < -tol) {
        const double discharge = -delta * b.eta_d / dh;
        if (discharge > b.max_discharge_kw + tol) return false;
        quantity = (surplus + discharge) * dh;
    } else {
        quantity = surplus * dh;
    }
    return true;
}

inline void oracle_bess_dfs(const std::vector<double>& surplus, const std::vector<double>& prices,
                            const bvpp::BessSpec& bess, double dh,
                            const std::vector<double>& levels, std::size_t t, double soc,
                            double revenue, double& best, bool& first) {
    if (t == surplus.size()) {
        if (first || revenue > best) {
            best = revenue;
            first = false;
        }
        return;
    }
    for (double to : levels) {
        double quantity = 0.0;
        if (!oracle_bess_transition(soc, to, surplus[t], bess, dh, quantity)) continue;
        oracle_bess_dfs(surplus, prices, bess, dh, levels, t + 1, to,
                        revenue + prices[t] * quantity, best, first);
    }
}

inline double oracle_bess_revenue(const std::vector<double>& surplus,
                                  const std::vector<double>& prices, const bvpp::BessSpec& bess,
                                  double dh, int soc_levels) {
    std::vector<double> levels(static_cast<std::size_t>(soc_levels));
    const double step = (bess.soc_max_kwh - bess.soc_min_kwh) / (soc_levels - 1);
    for (int k = 0; k < soc_levels; ++k)
        levels[static_cast<std::size_t>(k)] = bess.soc_min_kwh + k * step;
    levels.push_back(bess.soc_init_kwh);  // the DP's exact-init state
    double best = 0.0;
    bool first = true;
    oracle_bess_dfs(surplus, prices, bess, dh, levels, 0, bess.soc_init_kwh, 0.0, best, first);
    return best;
}

}  // namespace testsup
