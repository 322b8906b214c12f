#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "bvpp/bems.hpp"
#include "bvpp/errors.hpp"
#include "bvpp/load_profile.hpp"
#include "bvpp/profile_gen.hpp"
#include "bvpp/rng.hpp"
#include "bvpp/tariffs.hpp"
#include "support.hpp"

using namespace bvpp;

namespace {

TariffSet flat_tariffs(const TimeGrid& grid, double tou, double fit, double market) {
    const std::size_t n = static_cast<std::size_t>(grid.length());
    return TariffSet{std::vector<double>(n, tou), std::vector<double>(n, fit),
                     std::vector<double>(n, market)};
}

double schedule_cost(const testsup::SchedulerInstance& inst, const HouseholdRuns& runs) {
    return cost_breakdown(
               total_consumption(render_profiles(inst.model, runs, inst.grid), inst.grid),
               inst.solar, inst.tariffs)
        .f;
}

}  // namespace

TEST_CASE("flat one-kilowatt day bills at tou times energy") {
    const TimeGrid grid = testsup::hourly(1);
    LoadProfile cons = make_profile(grid);
    for (double& v : cons.values) v = 1.0;
    const LoadProfile solar = make_profile(grid);

    const CostBreakdown cost = cost_breakdown(cons, solar, flat_tariffs(grid, 0.3, 0.1, 0.4));
    CHECK(cost.c_tou == doctest::Approx(7.2).epsilon(1e-12));
    CHECK(cost.r_fi == 0.0);
    CHECK(cost.f == doctest::Approx(7.2).epsilon(1e-12));
}

TEST_CASE("consumption exactly covered by solar costs nothing") {
    const TimeGrid grid = testsup::hourly(2);
    LoadProfile cons = make_profile(grid);
    LoadProfile solar = make_profile(grid);
    CounterRng rng(stream_key(11, "cover", 0, 0));
    for (std::size_t t = 0; t < cons.values.size(); ++t)
        cons.values[t] = solar.values[t] = rng.next_uniform(0.0, 3.0);

    const CostBreakdown cost = cost_breakdown(cons, solar, flat_tariffs(grid, 0.3, 0.1, 0.4));
    CHECK(cost.c_tou == 0.0);
    CHECK(cost.r_fi == 0.0);
    CHECK(cost.f == 0.0);
}

TEST_CASE("cost breakdown matches an elementwise netting oracle") {
    const TimeGrid grid = testsup::hourly(3);
    LoadProfile cons = make_profile(grid);
    LoadProfile solar = make_profile(grid);
    TariffSet tariffs = flat_tariffs(grid, 0.0, 0.0, 1.0);
    CounterRng rng(stream_key(12, "cost-oracle", 0, 0));
    for (std::size_t t = 0; t < cons.values.size(); ++t) {
        cons.values[t] = rng.next_uniform(0.0, 4.0);
        solar.values[t] = rng.next_uniform(0.0, 4.0);
        tariffs.tou[t] = rng.next_uniform(0.05, 0.6);
        tariffs.market_price[t] = rng.next_uniform(0.2, 0.5);
        tariffs.fit[t] = tariffs.market_price[t] * 0.5;
    }

    double c_tou = 0.0, r_fi = 0.0;
    const double dh = grid.delta_hours();
    for (std::size_t t = 0; t < cons.values.size(); ++t) {
        const double g = std::max(cons.values[t] - solar.values[t], 0.0);
        const double x = std::max(solar.values[t] - cons.values[t], 0.0);
        c_tou += tariffs.tou[t] * g * dh;
        r_fi += tariffs.fit[t] * x * dh;
    }

    const CostBreakdown cost = cost_breakdown(cons, solar, tariffs);
    CHECK(cost.c_tou == doctest::Approx(c_tou).epsilon(1e-9));
    CHECK(cost.r_fi == doctest::Approx(r_fi).epsilon(1e-9));
    CHECK(cost.f == doctest::Approx(c_tou - r_fi).epsilon(1e-9));

    SUBCASE("grid mismatch is rejected") {
        LoadProfile other = make_profile(testsup::hourly(2));
        CHECK_THROWS_AS(cost_breakdown(cons, other, tariffs), GridMismatch);
    }
}

TEST_CASE("net load is the signed consumption minus solar") {
    const TimeGrid grid = testsup::hourly(1);
    LoadProfile cons = make_profile(grid);
    LoadProfile solar = make_profile(grid);
    cons.values[3] = 2.0;
    solar.values[3] = 0.5;
    solar.values[12] = 4.0;

    const NetLoadProfile net = net_load(cons, solar);
    CHECK(net.values[3] == 1.5);
    CHECK(net.values[12] == -4.0);
    CHECK(net.values[0] == 0.0);
    for (std::size_t t = 0; t < net.values.size(); ++t)
        CHECK(net.values[t] == cons.values[t] - solar.values[t]);
}

TEST_CASE("cheap late interval attracts a single shiftable run") {
    // Window {18,19,20}, tou 0.5 except 0.1 at interval 20: moving the 2 kW
    // one-interval run from 18 to 20 saves (0.5 - 0.1) * 2 = 0.8.
    const TimeGrid grid = testsup::hourly(1);
    HouseholdModel model;
    model.id = "h";
    model.seed = 1;
    ApplianceSpec spec;
    spec.id = "wm";
    spec.name = "washing machine";
    spec.category = ApplianceCategory::Shiftable;
    spec.rated_power_kw = 2.0;
    spec.duration = 1;
    spec.earliest_start = 18;
    spec.latest_start = 20;
    spec.preferred_start = 18;
    model.appliances.push_back({spec, Lifestyle{1.0, 0.0}});

    TariffSet tariffs = flat_tariffs(grid, 0.5, 0.05, 0.6);
    tariffs.tou[20] = 0.1;

    HouseholdRuns runs;
    runs["wm"] = {ApplianceDayRun{true, 18}};
    const LoadProfile solar = make_profile(grid);

    const ScheduleResult result = optimize_schedule(model, runs, solar, tariffs, grid);
    CHECK(result.schedule.starts.at("wm").at(0) == 20);
    CHECK(result.default_cost.f - result.cost.f == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("optimizer reproduces the exhaustive oracle on random instances") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = testsup::random_scheduler_instance(seed, 3, 8, 2);
        const ScheduleResult result =
            optimize_schedule(inst.model, inst.activations, inst.solar, inst.tariffs, inst.grid);
        const Schedule oracle =
            testsup::oracle_schedule(inst.model, inst.activations, inst.solar, inst.tariffs,
                                     inst.grid);

        INFO("seed=", seed);
        REQUIRE(result.schedule.starts.size() == oracle.starts.size());
        for (const auto& [id, days] : oracle.starts) {
            const auto& got = result.schedule.starts.at(id);
            REQUIRE(got.size() == days.size());
            for (const auto& [day, start] : days) CHECK(got.at(day) == start);
        }

        const HouseholdRuns best =
            apply_schedule(inst.model, inst.activations, oracle);
        CHECK(result.cost.f == schedule_cost(inst, best));
    }
}

TEST_CASE("optimized schedule never loses to the default or random schedules") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto inst = testsup::random_scheduler_instance(seed, 3, 8, 3);
        const ScheduleResult result =
            optimize_schedule(inst.model, inst.activations, inst.solar, inst.tariffs, inst.grid);
        CHECK(result.cost.f <= result.default_cost.f);

        CounterRng rng(stream_key(seed, "random-schedule", 0, 0));
        for (int trial = 0; trial < 100; ++trial) {
            Schedule random_s;
            for (const HouseholdAppliance& app : inst.model.appliances) {
                if (app.spec.category != ApplianceCategory::Shiftable) continue;
                const std::vector<int> starts = feasible_starts(app.spec);
                const auto& days = inst.activations.at(app.spec.id);
                for (std::size_t d = 0; d < days.size(); ++d)
                    if (days[d].active)
                        random_s.starts[app.spec.id][static_cast<int>(d)] =
                            starts[static_cast<std::size_t>(
                                rng.next_int(0, static_cast<int>(starts.size()) - 1))];
            }
            const double f_random =
                schedule_cost(inst, apply_schedule(inst.model, inst.activations, random_s));
            CHECK(result.cost.f <= f_random + 1e-12);
        }
    }
}

TEST_CASE("households without shiftable appliances keep their default cost") {
    const TimeGrid grid = testsup::hourly(2);
    HouseholdModel model;
    model.id = "h";
    model.seed = 4;
    ApplianceSpec spec;
    spec.id = "tv";
    spec.name = "tv";
    spec.rated_power_kw = 0.4;
    spec.duration = 3;
    spec.earliest_start = spec.latest_start = spec.preferred_start = 19;
    model.appliances.push_back({spec, Lifestyle{1.0, 0.0}});

    const auto runs = simulate_household_runs(model, grid);
    const LoadProfile solar = make_profile(grid);
    const ScheduleResult result =
        optimize_schedule(model, runs, solar, flat_tariffs(grid, 0.3, 0.1, 0.4), grid);
    CHECK(result.schedule.starts.empty());
    CHECK(result.cost.f == result.default_cost.f);
}

TEST_CASE("shifting preserves total consumed energy") {
    for (std::uint64_t seed = 7; seed < 12; ++seed) {
        const auto inst = testsup::random_scheduler_instance(seed, 3, 8, 4);
        const ScheduleResult result =
            optimize_schedule(inst.model, inst.activations, inst.solar, inst.tariffs, inst.grid);
        const HouseholdRuns optimized =
            apply_schedule(inst.model, inst.activations, result.schedule);
        const double before = total_energy_kwh(
            total_consumption(render_profiles(inst.model, inst.activations, inst.grid),
                              inst.grid));
        const double after = total_energy_kwh(
            total_consumption(render_profiles(inst.model, optimized, inst.grid), inst.grid));
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("appliance declaration order does not change the schedule") {
    const auto inst = testsup::random_scheduler_instance(55, 3, 8, 2);
    HouseholdModel shuffled = inst.model;
    std::reverse(shuffled.appliances.begin(), shuffled.appliances.end());

    const ScheduleResult a =
        optimize_schedule(inst.model, inst.activations, inst.solar, inst.tariffs, inst.grid);
    const ScheduleResult b =
        optimize_schedule(shuffled, inst.activations, inst.solar, inst.tariffs, inst.grid);

    CHECK(a.cost.f == b.cost.f);
    REQUIRE(a.schedule.starts.size() == b.schedule.starts.size());
    for (const auto& [id, days] : a.schedule.starts) {
        const auto& other = b.schedule.starts.at(id);
        for (const auto& [day, start] : days) CHECK(other.at(day) == start);
    }
}

TEST_CASE("flat tariffs make every start a tie broken toward the earliest") {
    const auto inst = testsup::random_scheduler_instance(77, 3, 6, 1);
    testsup::SchedulerInstance flat = inst;
    flat.tariffs = flat_tariffs(inst.grid, 0.3, 0.1, 0.4);
    for (double& v : flat.solar.values) v = 0.0;  // no export side either

    const ScheduleResult result =
        optimize_schedule(flat.model, flat.activations, flat.solar, flat.tariffs, flat.grid);
    for (const auto& [id, days] : result.schedule.starts) {
        const HouseholdAppliance* app = nullptr;
        for (const HouseholdAppliance& a : flat.model.appliances)
            if (a.spec.id == id) app = &a;
        REQUIRE(app != nullptr);
        for (const auto& [day, start] : days)
            CHECK(start == feasible_starts(app->spec).front());
    }
}

TEST_CASE("coordinate descent stays between enumeration and the default") {
    for (std::uint64_t seed = 200; seed < 220; ++seed) {
        const auto inst = testsup::random_scheduler_instance(seed, 3, 8, 2);
        const ScheduleResult exact =
            optimize_schedule(inst.model, inst.activations, inst.solar, inst.tariffs, inst.grid);
        const ScheduleResult descent = optimize_schedule(inst.model, inst.activations, inst.solar,
                                                         inst.tariffs, inst.grid,
                                                         /*enumeration_limit=*/1);

        INFO("seed=", seed);
        CHECK(exact.cost.f <= descent.cost.f + 1e-12);
        CHECK(descent.cost.f <= descent.default_cost.f + 1e-12);

        // Fixed point: no single-appliance move on any day improves it.
        const HouseholdRuns at = apply_schedule(inst.model, inst.activations, descent.schedule);
        const double f_cd = schedule_cost(inst, at);
        for (const auto& [id, days] : descent.schedule.starts) {
            const HouseholdAppliance* app = nullptr;
            for (const HouseholdAppliance& a : inst.model.appliances)
                if (a.spec.id == id) app = &a;
            REQUIRE(app != nullptr);
            for (const auto& [day, start] : days) {
                for (int alt : feasible_starts(app->spec)) {
                    if (alt == start) continue;
                    Schedule moved = descent.schedule;
                    moved.starts[id][day] = alt;
                    const double f_alt =
                        schedule_cost(inst, apply_schedule(inst.model, inst.activations, moved));
                    CHECK(f_cd <= f_alt + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("schedule application rejects unknown ids and inactive days") {
    const TimeGrid grid = testsup::hourly(1);
    HouseholdModel model;
    model.id = "h";
    ApplianceSpec spec;
    spec.id = "wm";
    spec.category = ApplianceCategory::Shiftable;
    spec.rated_power_kw = 1.0;
    spec.duration = 1;
    spec.earliest_start = 8;
    spec.latest_start = 12;
    spec.preferred_start = 8;
    model.appliances.push_back({spec, Lifestyle{1.0, 0.0}});

    HouseholdRuns runs;
    runs["wm"] = {ApplianceDayRun{false, 8}};

    Schedule unknown;
    unknown.starts["nope"][0] = 9;
    CHECK_THROWS_AS(apply_schedule(model, runs, unknown), Error);

    Schedule inactive;
    inactive.starts["wm"][0] = 9;
    CHECK_THROWS_AS(apply_schedule(model, runs, inactive), Error);
}
