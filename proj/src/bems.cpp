#include "bvpp/bems.hpp"

#include <algorithm>
#include <vector>

namespace bvpp {

CostBreakdown cost_breakdown(const LoadProfile& consumption, const LoadProfile& solar,
                             const TariffSet& tariffs) {
    check_same_grid(consumption.grid, solar.grid, "cost_breakdown");
    validate(tariffs, consumption.grid);
    const double dh = consumption.grid.delta_hours();
    CostBreakdown out;
    for (std::size_t t = 0; t < consumption.values.size(); ++t) {
        const double net = consumption.values[t] - solar.values[t];
        if (net >= 0.0)
            out.c_tou += tariffs.tou[t] * net * dh;
        else
            out.r_fi += tariffs.fit[t] * (-net) * dh;
    }
    out.f = out.c_tou - out.r_fi;
    return out;
}

NetLoadProfile net_load(const LoadProfile& consumption, const LoadProfile& solar) {
    check_same_grid(consumption.grid, solar.grid, "net_load");
    NetLoadProfile out{consumption.values, consumption.grid};
    for (std::size_t t = 0; t < out.values.size(); ++t) out.values[t] -= solar.values[t];
    return out;
}

Schedule default_schedule(const HouseholdModel& model, const HouseholdRuns& runs) {
    Schedule s;
    for (const HouseholdAppliance& app : model.appliances) {
        if (app.spec.category != ApplianceCategory::Shiftable) continue;
        auto it = runs.find(app.spec.id);
        if (it == runs.end()) continue;
        const std::vector<ApplianceDayRun>& days = it->second;
        for (std::size_t d = 0; d < days.size(); ++d)
            if (days[d].active) s.starts[app.spec.id][static_cast<int>(d)] = days[d].start;
    }
    return s;
}

HouseholdRuns apply_schedule(const HouseholdModel& model, const HouseholdRuns& runs,
                             const Schedule& schedule) {
    HouseholdRuns out = runs;
    for (const auto& [id, day_starts] : schedule.starts) {
        auto it = out.find(id);
        if (it == out.end()) throw Error("apply_schedule: unknown appliance '" + id + "'");
        for (const auto& [day, start] : day_starts) {
            ApplianceDayRun& run = it->second.at(static_cast<std::size_t>(day));
            if (!run.active)
                throw Error("apply_schedule: appliance '" + id + "' inactive on day " +
                            std::to_string(day));
            run.start = start;
        }
    }
    (void)model;
    return out;
}

namespace {

// One active shiftable appliance on one day.
struct DayItem {
    const ApplianceSpec* spec;
    std::vector<int> candidates;  // feasible starts, ascending
    int start;                    // current choice
};

double day_objective(const std::vector<double>& cons, const double* solar, const double* tou,
                     const double* fit, int t_day, double dh) {
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

void add_run(std::vector<double>& cons, const ApplianceSpec& spec, int start, double sign) {
    for (int k = 0; k < spec.duration; ++k)
        cons[static_cast<std::size_t>(start + k)] += sign * spec.rated_power_kw;
}

// Exact optimum by enumerating the cross product of candidate starts in
// lexicographic (appliance id, start) order; the first strict minimum wins,
// which makes ties land on the lexicographically smallest schedule.
double enumerate_day(std::vector<DayItem>& items, const std::vector<double>& base,
                     const double* solar, const double* tou, const double* fit, int t_day,
                     double dh) {
    std::vector<std::size_t> idx(items.size(), 0);
    std::vector<double> scratch(base.size());
    std::vector<int> best_idx;
    double best_f = 0.0;
    bool first = true;
    while (true) {
        scratch = base;
        for (std::size_t i = 0; i < items.size(); ++i)
            add_run(scratch, *items[i].spec, items[i].candidates[idx[i]], 1.0);
        const double f = day_objective(scratch, solar, tou, fit, t_day, dh);
        if (first || f < best_f) {
            best_f = f;
            best_idx.assign(idx.begin(), idx.end());
            first = false;
        }
        // odometer: last item runs fastest, so earlier items are more significant
        std::size_t pos = items.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < items[pos].candidates.size()) break;
            idx[pos] = 0;
            if (pos == 0) {
                for (std::size_t i = 0; i < items.size(); ++i)
                    items[i].start = items[i].candidates[best_idx[i]];
                return best_f;
            }
        }
    }
}

// Coordinate descent from the as-generated starts: cycle appliances in id
// order, each taking its best start given the others; accept only strict
// improvements (earliest start among equal improvements) until a full cycle
// makes no move.
double descend_day(std::vector<DayItem>& items, const std::vector<double>& base,
                   const double* solar, const double* tou, const double* fit, int t_day,
                   double dh) {
    std::vector<double> cons(base);
    for (const DayItem& item : items) add_run(cons, *item.spec, item.start, 1.0);
    double f_cur = day_objective(cons, solar, tou, fit, t_day, dh);
    bool improved = true;
    while (improved) {
        improved = false;
        for (DayItem& item : items) {
            add_run(cons, *item.spec, item.start, -1.0);
            int best_start = item.start;
            double best_f = f_cur;
            for (int cand : item.candidates) {
                if (cand == item.start) continue;
                add_run(cons, *item.spec, cand, 1.0);
                const double f = day_objective(cons, solar, tou, fit, t_day, dh);
                add_run(cons, *item.spec, cand, -1.0);
                if (f < best_f) {  // ascending order keeps the earliest tie
                    best_f = f;
                    best_start = cand;
                }
            }
            if (best_f < f_cur) {
                item.start = best_start;
                f_cur = best_f;
                improved = true;
            }
            add_run(cons, *item.spec, item.start, 1.0);
        }
    }
    return f_cur;
}

}  // namespace

ScheduleResult optimize_schedule(const HouseholdModel& model, const HouseholdRuns& activations,
                                 const LoadProfile& solar, const TariffSet& tariffs,
                                 const TimeGrid& grid, long long enumeration_limit) {
    check_same_grid(solar.grid, grid, "optimize_schedule");
    validate(tariffs, grid);
    validate(model, grid);

    // shiftable appliances in id order; ids index into `activations`
    std::vector<const HouseholdAppliance*> shiftable;
    for (const HouseholdAppliance& app : model.appliances)
        if (app.spec.category == ApplianceCategory::Shiftable) shiftable.push_back(&app);
    std::sort(shiftable.begin(), shiftable.end(),
              [](const HouseholdAppliance* a, const HouseholdAppliance* b) {
                  return a->spec.id < b->spec.id;
              });

    const int t_day = grid.intervals_per_day;
    const double dh = grid.delta_hours();
    Schedule schedule;

    for (int d = 0; d < grid.num_days; ++d) {
        const std::size_t off = static_cast<std::size_t>(d) * static_cast<std::size_t>(t_day);

        // fixed consumption: every non-shiftable active run
        std::vector<double> base(static_cast<std::size_t>(t_day), 0.0);
        for (const HouseholdAppliance& app : model.appliances) {
            if (app.spec.category == ApplianceCategory::Shiftable) continue;
            const ApplianceDayRun& run =
                activations.at(app.spec.id).at(static_cast<std::size_t>(d));
            if (run.active) add_run(base, app.spec, run.start, 1.0);
        }

        std::vector<DayItem> items;
        long long combos = 1;
        for (const HouseholdAppliance* app : shiftable) {
            const ApplianceDayRun& run =
                activations.at(app->spec.id).at(static_cast<std::size_t>(d));
            if (!run.active) continue;
            DayItem item{&app->spec, feasible_starts(app->spec), run.start};
            if (item.candidates.empty())
                throw InfeasibleWindow("appliance '" + app->spec.id +
                                       "': allowed window is entirely inside the curfew");
            if (combos <= enumeration_limit)
                combos *= static_cast<long long>(item.candidates.size());
            items.push_back(std::move(item));
        }

        if (!items.empty()) {
            const double* sol = solar.values.data() + off;
            const double* tou = tariffs.tou.data() + off;
            const double* fit = tariffs.fit.data() + off;
            if (combos <= enumeration_limit)
                enumerate_day(items, base, sol, tou, fit, t_day, dh);
            else
                descend_day(items, base, sol, tou, fit, t_day, dh);
            for (const DayItem& item : items) schedule.starts[item.spec->id][d] = item.start;
        }
    }

    ScheduleResult result;
    result.schedule = std::move(schedule);
    const HouseholdRuns optimized = apply_schedule(model, activations, result.schedule);
    result.cost =
        cost_breakdown(total_consumption(render_profiles(model, optimized, grid), grid), solar,
                       tariffs);
    result.default_cost =
        cost_breakdown(total_consumption(render_profiles(model, activations, grid), grid), solar,
                       tariffs);
    return result;
}

}  // namespace bvpp
