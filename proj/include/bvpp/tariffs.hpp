#pragma once

#include <vector>

#include "bvpp/errors.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

// Per-interval prices, all $/kWh on the scenario grid. The feed-in tariff is
// set by the operator strictly below the market clearing price.
struct TariffSet {
    std::vector<double> tou;           // retail time-of-use
    std::vector<double> fit;           // feed-in tariff
    std::vector<double> market_price;  // day-ahead clearing price forecast
};

inline void validate(const TariffSet& tariffs, const TimeGrid& grid) {
    const std::size_t n = static_cast<std::size_t>(grid.length());
    if (tariffs.tou.size() != n || tariffs.fit.size() != n || tariffs.market_price.size() != n)
        throw LengthMismatch("tariffs: all series must have length " + std::to_string(n));
    for (std::size_t t = 0; t < n; ++t) {
        if (tariffs.tou[t] < 0.0 || tariffs.fit[t] < 0.0 || tariffs.market_price[t] < 0.0)
            throw ConfigError("tariffs: negative price at interval " + std::to_string(t));
        if (!(tariffs.fit[t] < tariffs.market_price[t]))
            throw ConfigError("tariffs: fit must be strictly below market_price at interval " +
                              std::to_string(t));
    }
}

}  // namespace bvpp
