#include "bvpp/market.hpp"

#include <cmath>
#include <limits>

namespace bvpp {

SurplusAggregate aggregate_surplus(const std::map<std::string, NetLoadProfile>& net_loads,
                                   const TimeGrid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.length());
    const double dh = grid.delta_hours();
    SurplusAggregate agg;
    agg.surplus_kw.assign(n, 0.0);
    for (const auto& [id, net] : net_loads) {
        check_same_grid(net.grid, grid, "aggregate_surplus('" + id + "')");
        std::vector<double>& exp = agg.export_kwh[id];
        exp.assign(n, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double e = net.values[t] < 0.0 ? -net.values[t] : 0.0;
            agg.surplus_kw[t] += e;
            exp[t] = e * dh;
        }
    }
    return agg;
}

namespace {

constexpr double kFeasTol = 1e-9;

struct Action {
    double charge_kw = 0.0;
    double discharge_kw = 0.0;
    double quantity_kwh = 0.0;
};

// Single admissible action moving the SOC from `from` to `to` over one
// interval; charging draws from building surplus only.
bool transition(double from, double to, double surplus_kw, const BessSpec& b, double dh,
                Action& act) {
    const double delta = to - from;
    act = Action{};
    if (delta > kFeasTol) {
        act.charge_kw = delta / (b.eta_c * dh);
        if (act.charge_kw > b.max_charge_kw + kFeasTol) return false;
        if (act.charge_kw > surplus_kw + kFeasTol) return false;
        act.quantity_kwh = (surplus_kw - act.charge_kw) * dh;
        if (act.quantity_kwh < 0.0) act.quantity_kwh = 0.0;
    } else if (delta < -kFeasTol) {
        act.discharge_kw = -delta * b.eta_d / dh;
        if (act.discharge_kw > b.max_discharge_kw + kFeasTol) return false;
        act.quantity_kwh = (surplus_kw + act.discharge_kw) * dh;
    } else {
        act.quantity_kwh = surplus_kw * dh;
    }
    return true;
}

}  // namespace

BessResult optimize_bess(const std::vector<double>& surplus_kw,
                         const std::vector<double>& prices, const BessSpec& bess,
                         double delta_hours, int soc_levels) {
    validate(bess);
    if (soc_levels < 2) throw InfeasibleSpec("optimize_bess: soc_levels must be >= 2");
    if (delta_hours <= 0.0) throw InfeasibleSpec("optimize_bess: delta_hours must be > 0");
    if (surplus_kw.size() != prices.size())
        throw LengthMismatch("optimize_bess: surplus and price series differ in length");

    const int horizon = static_cast<int>(surplus_kw.size());
    BessResult result;
    result.plan.soc_kwh.assign(1, bess.soc_init_kwh);
    if (horizon == 0) return result;

    // states: the SOC lattice, plus the exact initial SOC as a sentinel so an
    // all-idle plan is always feasible even off-lattice
    const int lattice = soc_levels;
    const int states = lattice + 1;
    const double step = (bess.soc_max_kwh - bess.soc_min_kwh) / (soc_levels - 1);
    std::vector<double> level(static_cast<std::size_t>(states));
    for (int k = 0; k < lattice; ++k)
        level[static_cast<std::size_t>(k)] = bess.soc_min_kwh + k * step;
    level[static_cast<std::size_t>(lattice)] = bess.soc_init_kwh;

    const double neg_inf = -std::numeric_limits<double>::infinity();
    std::vector<double> value(static_cast<std::size_t>(states), neg_inf);
    std::vector<double> next(static_cast<std::size_t>(states), neg_inf);
    std::vector<std::vector<int>> parent(
        static_cast<std::size_t>(horizon), std::vector<int>(static_cast<std::size_t>(states), -1));

    Action act;
    for (int k = 0; k < states; ++k) {
        if (!transition(bess.soc_init_kwh, level[static_cast<std::size_t>(k)], surplus_kw[0],
                        bess, delta_hours, act))
            continue;
        value[static_cast<std::size_t>(k)] = prices[0] * act.quantity_kwh;
        parent[0][static_cast<std::size_t>(k)] = lattice;  // from the init sentinel
    }

    for (int t = 1; t < horizon; ++t) {
        for (int j = 0; j < states; ++j) {
            double best = neg_inf;
            int best_i = -1;
            for (int i = 0; i < states; ++i) {
                if (value[static_cast<std::size_t>(i)] == neg_inf) continue;
                if (!transition(level[static_cast<std::size_t>(i)],
                                level[static_cast<std::size_t>(j)],
                                surplus_kw[static_cast<std::size_t>(t)], bess, delta_hours, act))
                    continue;
                const double cand = value[static_cast<std::size_t>(i)] +
                                    prices[static_cast<std::size_t>(t)] * act.quantity_kwh;
                if (cand > best) {  // ascending scan keeps the lowest SOC on ties
                    best = cand;
                    best_i = i;
                }
            }
            next[static_cast<std::size_t>(j)] = best;
            parent[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = best_i;
        }
        value.swap(next);
    }

    int final_state = -1;
    double best_value = neg_inf;
    for (int k = 0; k < states; ++k) {
        if (value[static_cast<std::size_t>(k)] > best_value) {
            best_value = value[static_cast<std::size_t>(k)];
            final_state = k;
        }
    }
    if (final_state < 0)
        throw InfeasibleSpec("optimize_bess: no feasible dispatch path from soc_init");

    std::vector<int> path(static_cast<std::size_t>(horizon));
    path[static_cast<std::size_t>(horizon - 1)] = final_state;
    for (int t = horizon - 1; t > 0; --t)
        path[static_cast<std::size_t>(t - 1)] =
            parent[static_cast<std::size_t>(t)][static_cast<std::size_t>(path[static_cast<std::size_t>(t)])];

    result.plan.charge_kw.assign(static_cast<std::size_t>(horizon), 0.0);
    result.plan.discharge_kw.assign(static_cast<std::size_t>(horizon), 0.0);
    result.plan.soc_kwh.assign(static_cast<std::size_t>(horizon) + 1, bess.soc_init_kwh);
    result.bids.quantity_kwh.assign(static_cast<std::size_t>(horizon), 0.0);
    double soc = bess.soc_init_kwh;
    for (int t = 0; t < horizon; ++t) {
        const double to = level[static_cast<std::size_t>(path[static_cast<std::size_t>(t)])];
        if (!transition(soc, to, surplus_kw[static_cast<std::size_t>(t)], bess, delta_hours, act))
            throw Error("optimize_bess: internal path reconstruction failure");
        result.plan.charge_kw[static_cast<std::size_t>(t)] = act.charge_kw;
        result.plan.discharge_kw[static_cast<std::size_t>(t)] = act.discharge_kw;
        result.bids.quantity_kwh[static_cast<std::size_t>(t)] = act.quantity_kwh;
        result.revenue += prices[static_cast<std::size_t>(t)] * act.quantity_kwh;
        soc = to;
        result.plan.soc_kwh[static_cast<std::size_t>(t) + 1] = soc;
    }
    return result;
}

Settlement settle(const BidSeries& bids, const std::vector<double>& prices,
                  const std::vector<double>& fit,
                  const std::map<std::string, std::vector<double>>& export_kwh) {
    const std::size_t n = bids.quantity_kwh.size();
    if (prices.size() != n || fit.size() != n)
        throw LengthMismatch("settle: price series do not match the bid series");
    Settlement s;
    for (std::size_t t = 0; t < n; ++t) s.market_revenue += prices[t] * bids.quantity_kwh[t];
    double paid = 0.0;
    for (const auto& [id, exp] : export_kwh) {
        if (exp.size() != n)
            throw LengthMismatch("settle: exports of building '" + id +
                                 "' do not match the bid series");
        double payment = 0.0;
        for (std::size_t t = 0; t < n; ++t) payment += fit[t] * exp[t];
        s.building_payments[id] = payment;
        paid += payment;
    }
    s.operator_profit = s.market_revenue - paid;
    s.negative_profit_warning = s.operator_profit < 0.0;
    return s;
}

}  // namespace bvpp
