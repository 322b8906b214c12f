#pragma once

#include <string>
#include <vector>

#include "bvpp/errors.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

// Power time series on a grid, kW per interval. Consumption and solar
// profiles are non-negative; NetLoadProfile is the signed variant
// (negative values are surplus export).
struct LoadProfile {
    std::vector<double> values;  // kW
    TimeGrid grid;
};

struct NetLoadProfile {
    std::vector<double> values;  // kW, consumption minus solar
    TimeGrid grid;
};

inline LoadProfile make_profile(const TimeGrid& grid) {
    return LoadProfile{std::vector<double>(static_cast<std::size_t>(grid.length()), 0.0), grid};
}

inline void check_same_grid(const TimeGrid& a, const TimeGrid& b, const std::string& what) {
    if (!(a == b)) throw GridMismatch(what + ": series are not on the same grid");
}

inline double total_energy_kwh(const LoadProfile& p) {
    double sum = 0.0;
    for (double v : p.values) sum += v;
    return sum * p.grid.delta_hours();
}

// Average over days, per intraday interval. Length = intervals_per_day.
inline std::vector<double> mean_day(const LoadProfile& p) {
    const int t_day = p.grid.intervals_per_day;
    std::vector<double> out(static_cast<std::size_t>(t_day), 0.0);
    for (int d = 0; d < p.grid.num_days; ++d)
        for (int t = 0; t < t_day; ++t)
            out[static_cast<std::size_t>(t)] +=
                p.values[static_cast<std::size_t>(d * t_day + t)];
    for (double& v : out) v /= p.grid.num_days;
    return out;
}

}  // namespace bvpp
