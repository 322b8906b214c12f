#pragma once

#include "bvpp/errors.hpp"

namespace bvpp {

// Feeder battery owned by the BVPP operator.
struct BessSpec {
    double capacity_kwh = 0.0;
    double max_charge_kw = 0.0;
    double max_discharge_kw = 0.0;
    double eta_c = 1.0;  // charge efficiency, (0,1]
    double eta_d = 1.0;  // discharge efficiency, (0,1]
    double soc_min_kwh = 0.0;
    double soc_max_kwh = 0.0;
    double soc_init_kwh = 0.0;
};

inline void validate(const BessSpec& b) {
    if (b.capacity_kwh <= 0.0) throw InfeasibleSpec("bess: capacity_kwh must be > 0");
    if (b.max_charge_kw <= 0.0 || b.max_discharge_kw <= 0.0)
        throw InfeasibleSpec("bess: charge/discharge rates must be > 0");
    if (b.eta_c <= 0.0 || b.eta_c > 1.0 || b.eta_d <= 0.0 || b.eta_d > 1.0)
        throw InfeasibleSpec("bess: efficiencies must be in (0,1]");
    if (!(b.soc_min_kwh >= 0.0 && b.soc_min_kwh < b.soc_max_kwh &&
          b.soc_max_kwh <= b.capacity_kwh))
        throw InfeasibleSpec("bess: require 0 <= soc_min < soc_max <= capacity");
    if (b.soc_init_kwh < b.soc_min_kwh || b.soc_init_kwh > b.soc_max_kwh)
        throw InfeasibleSpec("bess: soc_init outside [soc_min, soc_max]");
}

}  // namespace bvpp
