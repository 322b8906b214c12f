#pragma once

// BVPP-level market operations: aggregate the buildings' surplus, run the
// feeder battery against the day-ahead price forecast, form quantity-only
// bids (the BVPP is a price taker) and split the market revenue between the
// operator and the exporting buildings.

#include <map>
#include <string>
#include <vector>

#include "bvpp/bess.hpp"
#include "bvpp/load_profile.hpp"

namespace bvpp {

struct SurplusAggregate {
    std::vector<double> surplus_kw;  // sum of building exports per interval
    std::map<std::string, std::vector<double>> export_kwh;  // building -> kWh per interval
};

struct DispatchPlan {
    std::vector<double> charge_kw;     // >= 0, drawn from building surplus only
    std::vector<double> discharge_kw;  // >= 0
    std::vector<double> soc_kwh;       // length T+1, soc_kwh[0] = soc_init
};

struct BidSeries {
    std::vector<double> quantity_kwh;  // (surplus - charge + discharge) * dh
};

struct Settlement {
    double market_revenue = 0.0;
    double operator_profit = 0.0;
    std::map<std::string, double> building_payments;
    bool negative_profit_warning = false;  // fit payments exceeded market revenue
};

// surplus[t] = sum over buildings of max(-net[t], 0); importers never offset
// exporters. Per-building exports are kept for settlement.
SurplusAggregate aggregate_surplus(const std::map<std::string, NetLoadProfile>& net_loads,
                                   const TimeGrid& grid);

struct BessResult {
    DispatchPlan plan;
    BidSeries bids;
    double revenue = 0.0;  // sum prices[t] * quantity[t]
};

// Maximize bid revenue by dynamic programming over the state of charge,
// discretized into `soc_levels` points between soc_min and soc_max. The
// first stage starts from the exact soc_init; ties prefer lower SOC.
// The battery charges only from surplus and never both ways at once.
BessResult optimize_bess(const std::vector<double>& surplus_kw,
                         const std::vector<double>& prices, const BessSpec& bess,
                         double delta_hours, int soc_levels = 201);

// market_revenue = sum prices*bids; each building is paid fit on its own
// exports; the operator keeps the rest. Flags (or throws nothing) when the
// payments exceed the revenue.
Settlement settle(const BidSeries& bids, const std::vector<double>& prices,
                  const std::vector<double>& fit,
                  const std::map<std::string, std::vector<double>>& export_kwh);

}  // namespace bvpp
