#pragma once

#include <string>

#include "bvpp/errors.hpp"

namespace bvpp {

// Fixed sampling grid shared by every profile and tariff in one scenario.
struct TimeGrid {
    int interval_minutes = 60;
    int intervals_per_day = 24;
    int num_days = 1;

    int length() const { return intervals_per_day * num_days; }
    double delta_hours() const { return interval_minutes / 60.0; }

    bool operator==(const TimeGrid&) const = default;
};

inline void validate(const TimeGrid& g) {
    if (g.interval_minutes <= 0 || g.intervals_per_day <= 0 || g.num_days <= 0)
        throw ConfigError("grid: all fields must be positive");
    if (g.interval_minutes * g.intervals_per_day != 1440)
        throw ConfigError("grid: interval_minutes * intervals_per_day must equal 1440, got " +
                          std::to_string(g.interval_minutes * g.intervals_per_day));
}

inline TimeGrid make_grid(int interval_minutes, int num_days) {
    if (interval_minutes <= 0 || 1440 % interval_minutes != 0)
        throw ConfigError("grid: interval_minutes must divide 1440, got " +
                          std::to_string(interval_minutes));
    TimeGrid g{interval_minutes, 1440 / interval_minutes, num_days};
    validate(g);
    return g;
}

}  // namespace bvpp
