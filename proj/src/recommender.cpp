#include "bvpp/recommender.hpp"

#include <algorithm>
#include <cmath>

#include "bvpp/appliance.hpp"

namespace bvpp {

HouseholdFeatures compute_features(const LoadProfile& consumption,
                                   const std::vector<double>& tou_per_kwh) {
    const TimeGrid& grid = consumption.grid;
    if (tou_per_kwh.size() != static_cast<std::size_t>(grid.length()))
        throw GridMismatch("compute_features: TOU series does not match the profile grid");
    const double dh = grid.delta_hours();
    const double days = static_cast<double>(grid.num_days);
    HouseholdFeatures f;
    double energy = 0.0;
    double cost = 0.0;
    for (std::size_t t = 0; t < consumption.values.size(); ++t) {
        energy += consumption.values[t] * dh;
        cost += tou_per_kwh[t] * consumption.values[t] * dh;
    }
    f.avg_daily_energy_kwh = energy / days;
    f.avg_daily_cost = cost / days;
    return f;
}

namespace {

double midpoint_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::set<std::string> flag_inefficient(const std::map<std::string, HouseholdFeatures>& group,
                                       const FlagParams& params) {
    std::set<std::string> flagged;
    const std::size_t n = group.size();
    if (n < 4) return flagged;  // too small for a meaningful residual split

    double mean_e = 0.0;
    double mean_c = 0.0;
    for (const auto& [id, f] : group) {
        mean_e += f.avg_daily_energy_kwh;
        mean_c += f.avg_daily_cost;
    }
    mean_e /= static_cast<double>(n);
    mean_c /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [id, f] : group) {
        const double de = f.avg_daily_energy_kwh - mean_e;
        sxx += de * de;
        sxy += de * (f.avg_daily_cost - mean_c);
    }

    if (sxx < 1e-18) {
        // all energies equal: regression is degenerate, split on cost alone
        std::vector<double> costs;
        costs.reserve(n);
        for (const auto& [id, f] : group) costs.push_back(f.avg_daily_cost);
        const double med = midpoint_median(costs);
        std::vector<double> dev;
        dev.reserve(n);
        for (double c : costs) dev.push_back(std::fabs(c - med));
        const double mad = midpoint_median(std::move(dev));
        for (const auto& [id, f] : group)
            if (f.avg_daily_cost > med + params.k * mad) flagged.insert(id);
        return flagged;
    }

    const double slope = sxy / sxx;
    const double intercept = mean_c - slope * mean_e;
    double var = 0.0;
    std::map<std::string, double> residual;
    for (const auto& [id, f] : group) {
        const double r = f.avg_daily_cost - (intercept + slope * f.avg_daily_energy_kwh);
        residual[id] = r;
        var += r * r;
    }
    const double sigma = std::sqrt(var / static_cast<double>(n));
    for (const auto& [id, r] : residual)
        if (r > params.k * sigma) flagged.insert(id);
    return flagged;
}

double lifestyle_similarity(const std::vector<double>& mean_day_a,
                            const std::vector<double>& mean_day_b) {
    if (mean_day_a.size() != mean_day_b.size() || mean_day_a.empty())
        throw GridMismatch("lifestyle_similarity: mean-day profiles disagree in length");
    double s = 0.0;
    for (std::size_t t = 0; t < mean_day_a.size(); ++t) {
        const double e = mean_day_a[t] - mean_day_b[t];
        s += e * e;
    }
    const double rmsd = std::sqrt(s / static_cast<double>(mean_day_a.size()));
    return 1.0 / (1.0 + rmsd);
}

std::vector<double> nonshiftable_mean_day(const HouseholdModel& model, const HouseholdRuns& runs,
                                          const TimeGrid& grid) {
    LoadProfile sum = make_profile(grid);
    for (const auto& ha : model.appliances) {
        if (ha.spec.category != ApplianceCategory::NonShiftable) continue;
        const auto it = runs.find(ha.spec.id);
        if (it == runs.end()) continue;
        const LoadProfile p = render_appliance_profile(ha.spec, it->second, grid);
        for (std::size_t t = 0; t < sum.values.size(); ++t) sum.values[t] += p.values[t];
    }
    return mean_day(sum);
}

double gross_tou_cost(const LoadProfile& consumption, const std::vector<double>& tou_per_kwh) {
    if (tou_per_kwh.size() != static_cast<std::size_t>(consumption.grid.length()))
        throw GridMismatch("gross_tou_cost: TOU series does not match the profile grid");
    const double dh = consumption.grid.delta_hours();
    double cost = 0.0;
    for (std::size_t t = 0; t < consumption.values.size(); ++t)
        cost += tou_per_kwh[t] * consumption.values[t] * dh;
    return cost;
}

std::map<std::string, int> peer_plan(const HouseholdModel& model, const HouseholdRuns& runs) {
    std::map<std::string, int> plan;
    for (const auto& ha : model.appliances) {
        if (ha.spec.category != ApplianceCategory::Shiftable) continue;
        const auto it = runs.find(ha.spec.id);
        if (it == runs.end()) continue;
        std::vector<int> starts;
        for (const ApplianceDayRun& run : it->second)
            if (run.active) starts.push_back(run.start);
        if (starts.empty()) continue;
        std::sort(starts.begin(), starts.end());
        plan[ha.spec.id] = starts[(starts.size() - 1) / 2];  // lower median
    }
    return plan;
}

std::vector<Recommendation> recommend(const HouseholdData& target,
                                      const std::vector<const HouseholdData*>& peers,
                                      const std::vector<double>& tou_per_kwh,
                                      const TimeGrid& grid, int top_n) {
    if (top_n < 1) throw DegenerateInput("recommend: top_n must be at least 1");
    if (target.model == nullptr || target.runs == nullptr)
        throw DegenerateInput("recommend: target is missing model or runs");

    std::vector<Recommendation> scored;
    for (const HouseholdData* peer : peers) {
        if (peer == nullptr || peer->model == nullptr || peer->runs == nullptr)
            throw DegenerateInput("recommend: peer is missing model or runs");
        const std::map<std::string, int> plan = peer_plan(*peer->model, *peer->runs);

        // transplant the peer's timing onto the target's own appliances
        HouseholdRuns adjusted = *target.runs;
        std::map<std::string, int> applied;
        for (const auto& ha : target.model->appliances) {
            if (ha.spec.category != ApplianceCategory::Shiftable) continue;
            const auto pit = plan.find(ha.spec.id);
            if (pit == plan.end()) continue;
            const int start = nearest_feasible_start(ha.spec, pit->second);
            auto rit = adjusted.find(ha.spec.id);
            if (rit == adjusted.end()) continue;
            bool any_active = false;
            for (ApplianceDayRun& run : rit->second)
                if (run.active) {
                    run.start = start;
                    any_active = true;
                }
            if (any_active) applied[ha.spec.id] = start;
        }
        if (applied.empty()) continue;

        const LoadProfile reshaped =
            total_consumption(render_profiles(*target.model, adjusted, grid), grid);
        const double saving = target.current_cost - gross_tou_cost(reshaped, tou_per_kwh);
        if (saving <= 0.0) continue;

        Recommendation rec;
        rec.peer_id = peer->id;
        rec.projected_saving = saving;
        rec.rating = lifestyle_similarity(target.mean_day_nonshiftable_kw,
                                          peer->mean_day_nonshiftable_kw) *
                     saving;
        rec.plan = std::move(applied);
        scored.push_back(std::move(rec));
    }

    std::sort(scored.begin(), scored.end(), [](const Recommendation& a, const Recommendation& b) {
        if (a.rating != b.rating) return a.rating > b.rating;
        return a.peer_id < b.peer_id;
    });
    if (scored.size() > static_cast<std::size_t>(top_n))
        scored.resize(static_cast<std::size_t>(top_n));
    return scored;
}

CampaignSummary campaign_savings(
    const std::map<std::string, std::vector<Recommendation>>& by_target) {
    CampaignSummary s;
    for (const auto& [id, recs] : by_target) {
        if (recs.empty()) continue;
        s.total_saving += recs.front().projected_saving;
        ++s.targets_with_recommendation;
    }
    if (s.targets_with_recommendation > 0)
        s.mean_saving = s.total_saving / s.targets_with_recommendation;
    return s;
}

}  // namespace bvpp
