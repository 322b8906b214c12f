#include "bvpp/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bvpp/profile_gen.hpp"
#include "bvpp/rng.hpp"

namespace bvpp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

void check_object(const json& v, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    if (!v.is_object()) fail(path, "must be an object");
    for (auto it = v.begin(); it != v.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) {
                known = true;
                break;
            }
        if (!known) fail(path + "." + it.key(), "unknown key");
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_num(const json& obj, const char* key, const std::string& path, double fallback,
               bool required = false) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        if (required) fail(path + "." + key, "required");
        return fallback;
    }
    if (!v->is_number()) fail(path + "." + key, "must be a number");
    return v->get<double>();
}

long get_int(const json& obj, const char* key, const std::string& path, long fallback,
             bool required = false) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        if (required) fail(path + "." + key, "required");
        return fallback;
    }
    if (!v->is_number_integer()) fail(path + "." + key, "must be an integer");
    return v->get<long>();
}

std::uint64_t get_u64(const json& obj, const char* key, const std::string& path,
                      std::uint64_t fallback) {
    const json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0 &&
                                    !v->is_number_unsigned()))
        fail(path + "." + key, "must be a non-negative integer");
    return v->get<std::uint64_t>();
}

std::string get_str(const json& obj, const char* key, const std::string& path,
                    const std::string& fallback, bool required = false) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        if (required) fail(path + "." + key, "required");
        return fallback;
    }
    if (!v->is_string()) fail(path + "." + key, "must be a string");
    return v->get<std::string>();
}

std::vector<double> get_num_array(const json& obj, const char* key, const std::string& path) {
    const json* v = find(obj, key);
    if (v == nullptr) fail(path + "." + key, "required");
    if (!v->is_array()) fail(path + "." + key, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v->size());
    for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number())
            fail(path + "." + key + "[" + std::to_string(i) + "]", "must be a number");
        out.push_back(e.get<double>());
    }
    return out;
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (std::isalnum(static_cast<unsigned char>(ch)) == 0 && ch != '_') return false;
    return true;
}

std::vector<double> tile_series(std::vector<double> v, const TimeGrid& grid,
                                const std::string& path) {
    const std::size_t day = static_cast<std::size_t>(grid.intervals_per_day);
    const std::size_t full = static_cast<std::size_t>(grid.length());
    if (v.size() == full) return v;
    if (v.size() == day) {
        std::vector<double> out;
        out.reserve(full);
        for (int d = 0; d < grid.num_days; ++d) out.insert(out.end(), v.begin(), v.end());
        return out;
    }
    fail(path, "length must be " + std::to_string(day) + " (one day) or " + std::to_string(full) +
                   " (full horizon), got " + std::to_string(v.size()));
}

HouseholdAppliance parse_appliance(const json& node, const std::string& path,
                                   int intervals_per_day) {
    check_object(node, path,
                 {"id", "name", "rated_power_kw", "duration", "earliest_start", "latest_start",
                  "preferred_start", "curfew", "activation_probability", "jitter_stddev"});
    HouseholdAppliance ha;
    ApplianceSpec& spec = ha.spec;
    spec.id = get_str(node, "id", path, "", true);
    if (!is_identifier(spec.id)) fail(path + ".id", "must be alphanumeric/underscore");
    spec.name = get_str(node, "name", path, spec.id);
    try {
        spec.category = classify_appliance(spec.name);
    } catch (const Error& e) {
        fail(path + ".name", e.what());
    }
    spec.rated_power_kw = get_num(node, "rated_power_kw", path, 0.0, true);
    spec.duration = static_cast<int>(get_int(node, "duration", path, 1));
    spec.earliest_start = static_cast<int>(get_int(node, "earliest_start", path, 0, true));
    spec.latest_start = static_cast<int>(get_int(node, "latest_start", path, 0, true));
    spec.preferred_start =
        static_cast<int>(get_int(node, "preferred_start", path, spec.earliest_start));
    if (const json* cf = find(node, "curfew")) {
        if (!cf->is_array()) fail(path + ".curfew", "must be an array of interval indices");
        for (std::size_t i = 0; i < cf->size(); ++i) {
            const json& e = (*cf)[i];
            if (!e.is_number_integer())
                fail(path + ".curfew[" + std::to_string(i) + "]", "must be an integer");
            spec.curfew.push_back(e.get<int>());
        }
    }
    try {
        validate(spec, intervals_per_day);
    } catch (const Error& e) {
        fail(path, e.what());
    }
    ha.lifestyle.activation_probability = get_num(node, "activation_probability", path, 1.0);
    ha.lifestyle.jitter_stddev = get_num(node, "jitter_stddev", path, 0.0);
    if (ha.lifestyle.activation_probability < 0.0 || ha.lifestyle.activation_probability > 1.0)
        fail(path + ".activation_probability", "must lie in [0,1]");
    if (ha.lifestyle.jitter_stddev < 0.0) fail(path + ".jitter_stddev", "must be >= 0");
    return ha;
}

}  // namespace

ScenarioConfig parse_scenario_config(const json& root, const std::string& origin) {
    check_object(root, origin,
                 {"grid", "seed", "output_dir", "tariffs", "solar", "bess", "scheduler", "fcm",
                  "flagging", "recommendation", "fleet"});
    ScenarioConfig config;

    if (const json* g = find(root, "grid")) {
        check_object(*g, "grid", {"interval_minutes", "num_days"});
        config.grid = make_grid(static_cast<int>(get_int(*g, "interval_minutes", "grid", 60)),
                                static_cast<int>(get_int(*g, "num_days", "grid", 1)));
    }

    config.seed = get_u64(root, "seed", origin, 0);
    config.output_dir = get_str(root, "output_dir", origin, "out");

    const json* tariffs = find(root, "tariffs");
    if (tariffs == nullptr) fail("tariffs", "required");
    check_object(*tariffs, "tariffs", {"tou", "fit", "market_price"});
    config.tariffs.tou =
        tile_series(get_num_array(*tariffs, "tou", "tariffs"), config.grid, "tariffs.tou");
    config.tariffs.fit =
        tile_series(get_num_array(*tariffs, "fit", "tariffs"), config.grid, "tariffs.fit");
    config.tariffs.market_price = tile_series(
        get_num_array(*tariffs, "market_price", "tariffs"), config.grid, "tariffs.market_price");
    validate(config.tariffs, config.grid);

    if (const json* solar = find(root, "solar")) {
        check_object(*solar, "solar", {"coefficients"});
        config.solar_coefficients = tile_series(get_num_array(*solar, "coefficients", "solar"),
                                                config.grid, "solar.coefficients");
        for (std::size_t t = 0; t < config.solar_coefficients.size(); ++t)
            if (config.solar_coefficients[t] < 0.0 || config.solar_coefficients[t] > 1.0)
                fail("solar.coefficients[" + std::to_string(t) + "]", "must lie in [0,1]");
    } else {
        config.solar_coefficients.assign(static_cast<std::size_t>(config.grid.length()), 0.0);
    }

    if (const json* bess = find(root, "bess")) {
        check_object(*bess, "bess",
                     {"capacity_kwh", "max_charge_kw", "max_discharge_kw", "eta_c", "eta_d",
                      "soc_min_kwh", "soc_max_kwh", "soc_init_kwh", "soc_levels"});
        BessSpec spec;
        spec.capacity_kwh = get_num(*bess, "capacity_kwh", "bess", 0.0, true);
        spec.max_charge_kw = get_num(*bess, "max_charge_kw", "bess", 0.0, true);
        spec.max_discharge_kw = get_num(*bess, "max_discharge_kw", "bess", 0.0, true);
        spec.eta_c = get_num(*bess, "eta_c", "bess", 1.0);
        spec.eta_d = get_num(*bess, "eta_d", "bess", 1.0);
        spec.soc_min_kwh = get_num(*bess, "soc_min_kwh", "bess", 0.0);
        spec.soc_max_kwh = get_num(*bess, "soc_max_kwh", "bess", spec.capacity_kwh);
        spec.soc_init_kwh = get_num(*bess, "soc_init_kwh", "bess", spec.soc_min_kwh);
        config.soc_levels = static_cast<int>(get_int(*bess, "soc_levels", "bess", 201));
        if (config.soc_levels < 2) fail("bess.soc_levels", "must be >= 2");
        try {
            validate(spec);
        } catch (const Error& e) {
            fail("bess", e.what());
        }
        config.bess = spec;
    }

    if (const json* sched = find(root, "scheduler")) {
        check_object(*sched, "scheduler", {"enumeration_limit"});
        config.enumeration_limit = get_int(*sched, "enumeration_limit", "scheduler", 1'000'000);
        if (config.enumeration_limit < 1) fail("scheduler.enumeration_limit", "must be >= 1");
    }

    if (const json* fcm = find(root, "fcm")) {
        check_object(*fcm, "fcm", {"clusters", "fuzzifier", "tol", "max_iter"});
        config.fcm.clusters = static_cast<int>(get_int(*fcm, "clusters", "fcm", 3));
        config.fcm.fuzzifier = get_num(*fcm, "fuzzifier", "fcm", 2.0);
        config.fcm.tol = get_num(*fcm, "tol", "fcm", 1e-6);
        config.fcm.max_iter = static_cast<int>(get_int(*fcm, "max_iter", "fcm", 300));
        if (config.fcm.clusters < 2) fail("fcm.clusters", "must be >= 2");
        if (!(config.fcm.fuzzifier > 1.0)) fail("fcm.fuzzifier", "must exceed 1");
        if (!(config.fcm.tol > 0.0)) fail("fcm.tol", "must be > 0");
        if (config.fcm.max_iter < 1) fail("fcm.max_iter", "must be >= 1");
    }

    if (const json* flag = find(root, "flagging")) {
        check_object(*flag, "flagging", {"k"});
        config.flagging.k = get_num(*flag, "k", "flagging", 1.0);
        if (config.flagging.k < 0.0) fail("flagging.k", "must be >= 0");
    }

    if (const json* rec = find(root, "recommendation")) {
        check_object(*rec, "recommendation", {"top_n"});
        config.top_n = static_cast<int>(get_int(*rec, "top_n", "recommendation", 2));
        if (config.top_n < 1) fail("recommendation.top_n", "must be >= 1");
    }

    const json* fleet = find(root, "fleet");
    if (fleet == nullptr) fail("fleet", "required");
    if (!fleet->is_array()) fail("fleet", "must be an array of blocks");
    for (std::size_t b = 0; b < fleet->size(); ++b) {
        const std::string path = "fleet[" + std::to_string(b) + "]";
        const json& node = (*fleet)[b];
        check_object(node, path, {"id_prefix", "count", "solar_capacity_kw", "appliances"});
        FleetBlock block;
        block.id_prefix = get_str(node, "id_prefix", path, "", true);
        if (!is_identifier(block.id_prefix)) fail(path + ".id_prefix", "must be alphanumeric/underscore");
        block.count = static_cast<int>(get_int(node, "count", path, 0, true));
        if (block.count < 0) fail(path + ".count", "must be >= 0");
        block.solar_capacity_kw = get_num(node, "solar_capacity_kw", path, 0.0);
        if (block.solar_capacity_kw < 0.0) fail(path + ".solar_capacity_kw", "must be >= 0");
        const json* apps = find(node, "appliances");
        if (apps == nullptr) fail(path + ".appliances", "required");
        if (!apps->is_array()) fail(path + ".appliances", "must be an array");
        for (std::size_t a = 0; a < apps->size(); ++a)
            block.appliances.push_back(parse_appliance(
                (*apps)[a], path + ".appliances[" + std::to_string(a) + "]",
                config.grid.intervals_per_day));
        config.fleet.push_back(std::move(block));
    }

    config.fcm.seed = config.seed;

    // expansion-level checks: the per-household validator plus id uniqueness
    std::set<std::string> ids;
    for (const HouseholdModel& model : expand_fleet(config)) {
        if (!ids.insert(model.id).second)
            fail("fleet", "household id '" + model.id + "' expands more than once");
        try {
            validate(model, config.grid);
        } catch (const Error& e) {
            fail("fleet", "household '" + model.id + "': " + e.what());
        }
    }
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    json root;
    try {
        root = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_scenario_config(root, path);
}

std::vector<HouseholdModel> expand_fleet(const ScenarioConfig& config) {
    std::vector<HouseholdModel> fleet;
    for (const FleetBlock& block : config.fleet) {
        const int width =
            static_cast<int>(std::to_string(block.count > 1 ? block.count - 1 : 0).size());
        for (int i = 0; i < block.count; ++i) {
            char idx[32];
            std::snprintf(idx, sizeof(idx), "%0*d", width, i);
            HouseholdModel model;
            model.id = block.id_prefix + idx;
            model.appliances = block.appliances;
            model.solar_capacity_kw = block.solar_capacity_kw;
            model.seed = stream_key(config.seed, "household", fnv1a64(model.id), 0);
            fleet.push_back(std::move(model));
        }
    }
    return fleet;
}

nlohmann::json to_effective_json(const ScenarioConfig& config) {
    json j;
    j["grid"] = {{"interval_minutes", config.grid.interval_minutes},
                 {"intervals_per_day", config.grid.intervals_per_day},
                 {"num_days", config.grid.num_days}};
    j["seed"] = config.seed;
    j["tariffs"] = {{"tou", config.tariffs.tou},
                    {"fit", config.tariffs.fit},
                    {"market_price", config.tariffs.market_price}};
    j["solar"] = {{"coefficients", config.solar_coefficients}};
    if (config.bess.has_value()) {
        const BessSpec& b = *config.bess;
        j["bess"] = {{"capacity_kwh", b.capacity_kwh},
                     {"max_charge_kw", b.max_charge_kw},
                     {"max_discharge_kw", b.max_discharge_kw},
                     {"eta_c", b.eta_c},
                     {"eta_d", b.eta_d},
                     {"soc_min_kwh", b.soc_min_kwh},
                     {"soc_max_kwh", b.soc_max_kwh},
                     {"soc_init_kwh", b.soc_init_kwh},
                     {"soc_levels", config.soc_levels}};
    }
    j["scheduler"] = {{"enumeration_limit", config.enumeration_limit}};
    j["fcm"] = {{"clusters", config.fcm.clusters},
                {"fuzzifier", config.fcm.fuzzifier},
                {"tol", config.fcm.tol},
                {"max_iter", config.fcm.max_iter}};
    j["flagging"] = {{"k", config.flagging.k}};
    j["recommendation"] = {{"top_n", config.top_n}};
    json fleet = json::array();
    for (const FleetBlock& block : config.fleet) {
        json apps = json::array();
        for (const HouseholdAppliance& ha : block.appliances) {
            apps.push_back({{"id", ha.spec.id},
                            {"name", ha.spec.name},
                            {"category", to_string(ha.spec.category)},
                            {"rated_power_kw", ha.spec.rated_power_kw},
                            {"duration", ha.spec.duration},
                            {"earliest_start", ha.spec.earliest_start},
                            {"latest_start", ha.spec.latest_start},
                            {"preferred_start", ha.spec.preferred_start},
                            {"curfew", ha.spec.curfew},
                            {"activation_probability", ha.lifestyle.activation_probability},
                            {"jitter_stddev", ha.lifestyle.jitter_stddev}});
        }
        fleet.push_back({{"id_prefix", block.id_prefix},
                         {"count", block.count},
                         {"solar_capacity_kw", block.solar_capacity_kw},
                         {"appliances", std::move(apps)}});
    }
    j["fleet"] = std::move(fleet);
    return j;
}

std::string config_hash_hex(const ScenarioConfig& config) {
    const std::uint64_t h = fnv1a64(to_effective_json(config).dump());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bvpp
