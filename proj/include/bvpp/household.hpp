#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvpp/appliance.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

// Daily behaviour of one appliance for one occupant.
struct Lifestyle {
    double activation_probability = 1.0;  // chance the appliance runs on a given day
    double jitter_stddev = 0.0;           // gaussian start jitter, in intervals
};

struct HouseholdAppliance {
    ApplianceSpec spec;
    Lifestyle lifestyle;
};

struct HouseholdModel {
    std::string id;
    std::vector<HouseholdAppliance> appliances;
    double solar_capacity_kw = 0.0;
    std::uint64_t seed = 0;
};

void validate(const HouseholdModel& model, const TimeGrid& grid);

}  // namespace bvpp
