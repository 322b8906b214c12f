#include "bvpp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>

#include "bvpp/bems.hpp"
#include "bvpp/csv.hpp"
#include "bvpp/fcm.hpp"
#include "bvpp/log.hpp"
#include "bvpp/market.hpp"
#include "bvpp/parallel.hpp"
#include "bvpp/profile_gen.hpp"
#include "bvpp/recommender.hpp"
#include "bvpp/version.hpp"

namespace bvpp {

namespace {

namespace fs = std::filesystem;

struct StageTimer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double stop_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string resolve_out(const ScenarioConfig& config, const RunOptions& opts) {
    return opts.out_dir.empty() ? config.output_dir : opts.out_dir;
}

void warn(const RunOptions& opts, const std::string& msg) {
    if (opts.strict) throw Error("warning escalated by --strict: " + msg);
    log_warn(msg);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    AtomicFile file(path);
    file.write(j.dump(2));
    file.write("\n");
    file.commit();
}

// Recover each appliance's day runs from its emitted power column. A run is
// a contiguous block of `duration` intervals at the rated power; everything
// else in the day must be zero.
HouseholdRuns reconstruct_runs(const HouseholdModel& model, const HouseholdProfileTable& table,
                               const std::string& path) {
    const int t_day = table.grid.intervals_per_day;
    HouseholdRuns runs;
    for (const HouseholdAppliance& ha : model.appliances) {
        const ApplianceSpec& spec = ha.spec;
        const auto it = table.appliance_kw.find(spec.id);
        if (it == table.appliance_kw.end())
            throw IoError(path + ": missing appliance column '" + spec.id + "'");
        const std::vector<double>& v = it->second;
        std::vector<ApplianceDayRun> day_runs(static_cast<std::size_t>(table.grid.num_days));
        for (int d = 0; d < table.grid.num_days; ++d) {
            const std::size_t base = static_cast<std::size_t>(d) * t_day;
            int start = -1;
            for (int t = 0; t < t_day; ++t)
                if (v[base + static_cast<std::size_t>(t)] > spec.rated_power_kw * 0.5) {
                    start = t;
                    break;
                }
            if (start < 0) {
                day_runs[static_cast<std::size_t>(d)] = {false, spec.preferred_start};
                continue;
            }
            const auto corrupt = [&](int t) {
                throw IoError(path + ": appliance '" + spec.id + "' day " + std::to_string(d) +
                              " interval " + std::to_string(t) + ": values do not form one run");
            };
            for (int t = 0; t < t_day; ++t) {
                const double value = v[base + static_cast<std::size_t>(t)];
                if (t >= start && t < start + spec.duration) {
                    if (t >= t_day || std::fabs(value - spec.rated_power_kw) > 1e-6) corrupt(t);
                } else if (std::fabs(value) > 1e-6) {
                    corrupt(t);
                }
            }
            day_runs[static_cast<std::size_t>(d)] = {true, start};
        }
        runs[spec.id] = std::move(day_runs);
    }
    return runs;
}

HouseholdProfileTable read_building_profile(const std::string& out, const std::string& id,
                                            const TimeGrid& grid) {
    const std::string path = out + "/profiles/" + id + ".csv";
    try {
        return read_profile_csv(path, grid);
    } catch (const IoError& e) {
        throw IoError(std::string(e.what()) + " (has 'generate' been run into this directory?)");
    }
}

}  // namespace

void apply_seed_override(ScenarioConfig& config, std::uint64_t seed) {
    // household seeds derive from config.seed inside expand_fleet
    config.seed = seed;
    config.fcm.seed = seed;
}

RunManifest run_generate(const ScenarioConfig& config, const RunOptions& opts) {
    const std::string out = resolve_out(config, opts);
    fs::create_directories(out + "/profiles");
    RunManifest manifest{"generate", config_hash_hex(config), kToolkitVersion, {}, {}};

    StageTimer t_tariffs;
    write_tariff_csv(out + "/tariffs.csv", config.tariffs, config.grid);
    manifest.stages.push_back({"deliver_tariffs", {"tariffs.csv"}, t_tariffs.stop_ms()});

    const std::vector<HouseholdModel> fleet = expand_fleet(config);
    std::vector<std::string> outputs(fleet.size());
    StageTimer t_profiles;
    parallel_for(fleet.size(), opts.threads, [&](std::size_t i) {
        const HouseholdModel& model = fleet[i];
        try {
            const HouseholdRuns runs = simulate_household_runs(model, config.grid);
            const std::map<std::string, LoadProfile> profiles =
                render_profiles(model, runs, config.grid);
            HouseholdProfileTable table;
            table.grid = config.grid;
            for (const HouseholdAppliance& ha : model.appliances) {
                table.appliance_columns.push_back(ha.spec.id);
                table.appliance_kw[ha.spec.id] = profiles.at(ha.spec.id).values;
            }
            table.consumption_kw = total_consumption(profiles, config.grid).values;
            table.solar_kw =
                solar_profile(model.solar_capacity_kw, config.solar_coefficients, config.grid)
                    .values;
            write_profile_csv(out + "/profiles/" + model.id + ".csv", table);
            outputs[i] = "profiles/" + model.id + ".csv";
        } catch (const Error& e) {
            throw Error("household '" + model.id + "': " + e.what());
        }
    });
    manifest.stages.push_back({"generate_profiles", outputs, t_profiles.stop_ms()});

    write_manifest(out, manifest);
    return manifest;
}

RunManifest run_case1(const ScenarioConfig& config, const RunOptions& opts) {
    const std::string out = resolve_out(config, opts);
    if (!config.bess.has_value())
        throw ConfigError("bess: required for the market pipeline");
    fs::create_directories(out + "/case1");
    RunManifest manifest{"case1", config_hash_hex(config), kToolkitVersion, {}, {}};
    const TimeGrid& grid = config.grid;

    StageTimer t_tariffs;
    const TariffSet tariffs = [&] {
        try {
            return read_tariff_csv(out + "/tariffs.csv", grid);
        } catch (const IoError& e) {
            throw IoError(std::string(e.what()) +
                          " (has 'generate' been run into this directory?)");
        }
    }();
    manifest.stages.push_back({"deliver_tariffs", {"tariffs.csv"}, t_tariffs.stop_ms()});

    const std::vector<HouseholdModel> fleet = expand_fleet(config);
    std::vector<std::string> schedule_files(fleet.size());
    std::vector<std::string> net_files(fleet.size());
    std::vector<NetLoadProfile> nets(fleet.size());

    StageTimer t_buildings;
    parallel_for(fleet.size(), opts.threads, [&](std::size_t i) {
        const HouseholdModel& model = fleet[i];
        try {
            const HouseholdProfileTable table = read_building_profile(out, model.id, grid);
            const HouseholdRuns activations = reconstruct_runs(model, table, model.id);
            const LoadProfile solar{table.solar_kw, grid};
            const ScheduleResult result = optimize_schedule(model, activations, solar, tariffs,
                                                            grid, config.enumeration_limit);
            const HouseholdRuns optimized = apply_schedule(model, activations, result.schedule);
            const LoadProfile consumption =
                total_consumption(render_profiles(model, optimized, grid), grid);
            NetLoadProfile net = net_load(consumption, solar);
            for (double& v : net.values) v = quantize9(v);  // downstream = emitted

            const Schedule defaults = default_schedule(model, activations);
            CsvTable schedule_csv;
            schedule_csv.header = {"appliance", "day", "start", "default_start"};
            for (const auto& [appliance, by_day] : result.schedule.starts)
                for (const auto& [day, start] : by_day)
                    schedule_csv.rows.push_back({appliance, std::to_string(day),
                                                 std::to_string(start),
                                                 std::to_string(defaults.starts.at(appliance).at(day))});
            write_csv(out + "/case1/schedule_" + model.id + ".csv", schedule_csv);
            write_series_csv(out + "/case1/net_load_" + model.id + ".csv", grid,
                             {{"net_kw", &net.values}});
            schedule_files[i] = "case1/schedule_" + model.id + ".csv";
            net_files[i] = "case1/net_load_" + model.id + ".csv";
            nets[i] = std::move(net);
        } catch (const Error& e) {
            throw Error("building '" + model.id + "': " + e.what());
        }
    });
    manifest.stages.push_back({"building_optimization", schedule_files, t_buildings.stop_ms()});

    StageTimer t_collect;
    std::map<std::string, NetLoadProfile> net_map;
    for (std::size_t i = 0; i < fleet.size(); ++i) net_map[fleet[i].id] = std::move(nets[i]);
    const SurplusAggregate agg = aggregate_surplus(net_map, grid);
    manifest.stages.push_back({"collect_net_loads", net_files, t_collect.stop_ms()});

    StageTimer t_bess;
    const BessResult bess = optimize_bess(agg.surplus_kw, tariffs.market_price, *config.bess,
                                          grid.delta_hours(), config.soc_levels);
    std::vector<double> revenue_per_interval(bess.bids.quantity_kwh.size());
    for (std::size_t t = 0; t < revenue_per_interval.size(); ++t)
        revenue_per_interval[t] = tariffs.market_price[t] * bess.bids.quantity_kwh[t];
    std::vector<double> soc_end(bess.plan.soc_kwh.begin() + 1, bess.plan.soc_kwh.end());
    write_series_csv(out + "/case1/bids.csv", grid,
                     {{"quantity_kwh", &bess.bids.quantity_kwh},
                      {"price_per_kwh", &tariffs.market_price},
                      {"revenue", &revenue_per_interval}});
    write_series_csv(out + "/case1/dispatch.csv", grid,
                     {{"charge_kw", &bess.plan.charge_kw},
                      {"discharge_kw", &bess.plan.discharge_kw},
                      {"soc_end_kwh", &soc_end}});
    manifest.stages.push_back(
        {"bess_bidding", {"case1/bids.csv", "case1/dispatch.csv"}, t_bess.stop_ms()});

    StageTimer t_settle;
    const Settlement settlement =
        settle(bess.bids, tariffs.market_price, tariffs.fit, agg.export_kwh);
    if (settlement.negative_profit_warning)
        warn(opts, "operator profit is negative; check fit against market prices");
    nlohmann::json sj;
    sj["market_revenue"] = settlement.market_revenue;
    sj["operator_profit"] = settlement.operator_profit;
    sj["building_payments"] = settlement.building_payments;
    sj["negative_profit_warning"] = settlement.negative_profit_warning;
    write_json_file(out + "/case1/settlement.json", sj);
    manifest.stages.push_back({"settlement", {"case1/settlement.json"}, t_settle.stop_ms()});

    manifest.extra = {{"market_revenue", settlement.market_revenue},
                      {"operator_profit", settlement.operator_profit}};
    write_manifest(out, manifest);
    return manifest;
}

RunManifest run_case2(const ScenarioConfig& config, const RunOptions& opts) {
    const std::string out = resolve_out(config, opts);
    fs::create_directories(out + "/case2");
    RunManifest manifest{"case2", config_hash_hex(config), kToolkitVersion, {}, {}};
    const TimeGrid& grid = config.grid;
    const int c = config.fcm.clusters;

    StageTimer t_load;
    const TariffSet tariffs = [&] {
        try {
            return read_tariff_csv(out + "/tariffs.csv", grid);
        } catch (const IoError& e) {
            throw IoError(std::string(e.what()) +
                          " (has 'generate' been run into this directory?)");
        }
    }();
    std::vector<HouseholdModel> fleet = expand_fleet(config);
    std::sort(fleet.begin(), fleet.end(),
              [](const HouseholdModel& a, const HouseholdModel& b) { return a.id < b.id; });
    const std::size_t n = fleet.size();

    struct Entry {
        HouseholdRuns runs;
        HouseholdFeatures features;
        HouseholdData data;
    };
    std::vector<Entry> entries(n);
    parallel_for(n, opts.threads, [&](std::size_t i) {
        const HouseholdModel& model = fleet[i];
        try {
            const HouseholdProfileTable table = read_building_profile(out, model.id, grid);
            Entry& e = entries[i];
            e.runs = reconstruct_runs(model, table, model.id);
            const LoadProfile consumption{table.consumption_kw, grid};
            e.features = compute_features(consumption, tariffs.tou);
            LoadProfile nonshiftable = make_profile(grid);
            for (const HouseholdAppliance& ha : model.appliances) {
                if (ha.spec.category != ApplianceCategory::NonShiftable) continue;
                const std::vector<double>& col = table.appliance_kw.at(ha.spec.id);
                for (std::size_t t = 0; t < col.size(); ++t) nonshiftable.values[t] += col[t];
            }
            e.data.id = model.id;
            e.data.model = &fleet[i];
            e.data.runs = &e.runs;
            e.data.mean_day_nonshiftable_kw = mean_day(nonshiftable);
            e.data.current_cost = gross_tou_cost(consumption, tariffs.tou);
        } catch (const Error& err) {
            throw Error("household '" + model.id + "': " + err.what());
        }
    });
    manifest.stages.push_back({"load_profiles", {}, t_load.stop_ms()});

    StageTimer t_cluster;
    std::vector<int> labels(n, 0);
    std::vector<std::vector<double>> membership(
        n, std::vector<double>(static_cast<std::size_t>(c), 0.0));
    bool degenerate = false;
    if (n > 0) {
        std::vector<std::vector<double>> points(n);
        for (std::size_t i = 0; i < n; ++i)
            points[i] = {entries[i].features.avg_daily_energy_kwh,
                         entries[i].features.avg_daily_cost};
        try {
            const Standardization st = fit_standardization(points);
            const FcmResult fcm = fcm_cluster(apply_standardization(points, st), config.fcm);
            labels = fcm.hard_labels;
            membership = fcm.membership;
        } catch (const DegenerateInput& e) {
            degenerate = true;
            warn(opts, std::string("clustering degenerated to one group: ") + e.what());
            for (std::size_t i = 0; i < n; ++i) membership[i][0] = 1.0;
        }
    }
    manifest.stages.push_back({"clustering", {}, t_cluster.stop_ms()});

    StageTimer t_flag;
    std::set<std::string> flagged;
    for (int k = 0; k < c; ++k) {
        std::map<std::string, HouseholdFeatures> group;
        for (std::size_t i = 0; i < n; ++i)
            if (labels[i] == k) group[fleet[i].id] = entries[i].features;
        const std::set<std::string> cluster_flags = flag_inefficient(group, config.flagging);
        flagged.insert(cluster_flags.begin(), cluster_flags.end());
    }

    CsvTable clusters_csv;
    clusters_csv.header = {"household", "cluster"};
    for (int k = 0; k < c; ++k) clusters_csv.header.push_back("membership_" + std::to_string(k));
    clusters_csv.header.push_back("flagged");
    CsvTable scatter_csv;
    scatter_csv.header = {"household", "avg_daily_energy_kwh", "avg_daily_cost", "cluster",
                          "flagged"};
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& id = fleet[i].id;
        const std::string flag = flagged.count(id) ? "1" : "0";
        std::vector<std::string> row = {id, std::to_string(labels[i])};
        for (int k = 0; k < c; ++k)
            row.push_back(format_fixed9(membership[i][static_cast<std::size_t>(k)]));
        row.push_back(flag);
        clusters_csv.rows.push_back(std::move(row));
        scatter_csv.rows.push_back({id, format_fixed9(entries[i].features.avg_daily_energy_kwh),
                                    format_fixed9(entries[i].features.avg_daily_cost),
                                    std::to_string(labels[i]), flag});
    }
    write_csv(out + "/case2/clusters.csv", clusters_csv);
    write_csv(out + "/case2/scatter.csv", scatter_csv);
    manifest.stages.push_back(
        {"flagging", {"case2/clusters.csv", "case2/scatter.csv"}, t_flag.stop_ms()});

    StageTimer t_rec;
    std::vector<std::size_t> target_idx;
    for (std::size_t i = 0; i < n; ++i)
        if (flagged.count(fleet[i].id)) target_idx.push_back(i);
    std::vector<std::vector<Recommendation>> recs(target_idx.size());
    parallel_for(target_idx.size(), opts.threads, [&](std::size_t j) {
        const std::size_t i = target_idx[j];
        std::vector<const HouseholdData*> peers;
        for (std::size_t p = 0; p < n; ++p)
            if (p != i && labels[p] == labels[i] && flagged.count(fleet[p].id) == 0)
                peers.push_back(&entries[p].data);
        try {
            recs[j] = recommend(entries[i].data, peers, tariffs.tou, grid, config.top_n);
        } catch (const Error& e) {
            throw Error("household '" + fleet[i].id + "': " + e.what());
        }
    });

    std::map<std::string, std::vector<Recommendation>> by_target;
    nlohmann::json targets_json = nlohmann::json::object();
    for (std::size_t j = 0; j < target_idx.size(); ++j) {
        const std::string& id = fleet[target_idx[j]].id;
        if (recs[j].empty())
            warn(opts, "no eligible peer plan for flagged household '" + id + "'");
        nlohmann::json list = nlohmann::json::array();
        for (const Recommendation& r : recs[j])
            list.push_back({{"peer_id", r.peer_id},
                            {"rating", r.rating},
                            {"projected_saving", r.projected_saving},
                            {"plan", r.plan}});
        targets_json[id] = std::move(list);
        by_target[id] = recs[j];
    }
    const CampaignSummary campaign = campaign_savings(by_target);
    nlohmann::json campaign_json = {
        {"total_saving", campaign.total_saving},
        {"mean_saving", campaign.mean_saving},
        {"targets_with_recommendation", campaign.targets_with_recommendation}};
    nlohmann::json rj;
    rj["targets"] = std::move(targets_json);
    rj["campaign"] = campaign_json;
    write_json_file(out + "/case2/recommendations.json", rj);
    manifest.stages.push_back(
        {"recommendations", {"case2/recommendations.json"}, t_rec.stop_ms()});

    manifest.extra = campaign_json;
    if (degenerate) manifest.extra["clustering_degenerate"] = true;
    write_manifest(out, manifest);
    return manifest;
}

}  // namespace bvpp
