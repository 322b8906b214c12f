#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bvpp/errors.hpp"
#include "bvpp/load_profile.hpp"
#include "bvpp/tariffs.hpp"
#include "bvpp/time_grid.hpp"

namespace bvpp {

// Numbers in CSVs carry exactly 9 fractional digits so that identical runs
// produce identical bytes; negative zero is normalized.
std::string format_fixed9(double v);
double parse_number(const std::string& field, const std::string& where);

// The value a reader will recover from the emitted field.
double quantize9(double v);

// Writes to "<path>.partial" and renames into place on commit, so an aborted
// run never leaves a partial file under the real name.
class AtomicFile {
public:
    explicit AtomicFile(const std::string& path);
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;
    ~AtomicFile();

    void write(const std::string& text);
    void commit();

private:
    std::string path_;
    std::string partial_path_;
    std::ofstream out_;
    bool committed_ = false;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

// Per-household profile file: day,interval,<one column per appliance>,
// consumption_kw,solar_kw — one row per interval of the horizon.
struct HouseholdProfileTable {
    TimeGrid grid;
    std::vector<std::string> appliance_columns;  // header order
    std::map<std::string, std::vector<double>> appliance_kw;
    std::vector<double> consumption_kw;
    std::vector<double> solar_kw;
};

void write_profile_csv(const std::string& path, const HouseholdProfileTable& table);
HouseholdProfileTable read_profile_csv(const std::string& path, const TimeGrid& grid);

// day,interval,tou_per_kwh,fit_per_kwh,market_price_per_kwh
void write_tariff_csv(const std::string& path, const TariffSet& tariffs, const TimeGrid& grid);
TariffSet read_tariff_csv(const std::string& path, const TimeGrid& grid);

// day,interval followed by the named value columns.
void write_series_csv(const std::string& path, const TimeGrid& grid,
                      const std::vector<std::pair<std::string, const std::vector<double>*>>& cols);
std::map<std::string, std::vector<double>> read_series_csv(const std::string& path,
                                                           const TimeGrid& grid);

}  // namespace bvpp
