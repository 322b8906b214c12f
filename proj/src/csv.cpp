#include "bvpp/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

namespace bvpp {

std::string format_fixed9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    std::string s(buf);
    if (s == "-0.000000000") s.erase(0, 1);
    return s;
}

double parse_number(const std::string& field, const std::string& where) {
    if (field.empty()) throw IoError(where + ": empty numeric field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE)
        throw IoError(where + ": malformed number '" + field + "'");
    return v;
}

double quantize9(double v) { return parse_number(format_fixed9(v), "quantize9"); }

AtomicFile::AtomicFile(const std::string& path)
    : path_(path), partial_path_(path + ".partial"), out_(partial_path_, std::ios::binary) {
    if (!out_) throw IoError("cannot open '" + partial_path_ + "' for writing");
}

AtomicFile::~AtomicFile() {
    if (!committed_) out_.close();  // the .partial file stays behind as evidence
}

void AtomicFile::write(const std::string& text) {
    out_ << text;
    if (!out_) throw IoError("write failed on '" + partial_path_ + "'");
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw IoError("flush failed on '" + partial_path_ + "'");
    out_.close();
    std::error_code ec;
    std::filesystem::rename(partial_path_, path_, ec);
    if (ec) throw IoError("cannot rename '" + partial_path_ + "' to '" + path_ + "'");
    committed_ = true;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string row_context(const std::string& path, std::size_t line_no) {
    return path + ":" + std::to_string(line_no);
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (line_no == 1) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw IoError(row_context(path, line_no) + ": expected " +
                          std::to_string(table.header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw IoError(path + ": missing header row");
    return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
    AtomicFile file(path);
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i > 0) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    file.write(out.str());
    file.commit();
}

namespace {

// day,interval prefix shared by every time-indexed CSV
void check_time_columns(const CsvTable& table, const TimeGrid& grid, const std::string& path) {
    if (table.header.size() < 2 || table.header[0] != "day" || table.header[1] != "interval")
        throw IoError(path + ": header must start with day,interval");
    if (table.rows.size() != static_cast<std::size_t>(grid.length()))
        throw IoError(path + ": expected " + std::to_string(grid.length()) + " data rows, got " +
                      std::to_string(table.rows.size()));
    for (std::size_t t = 0; t < table.rows.size(); ++t) {
        const long day = static_cast<long>(t) / grid.intervals_per_day;
        const long interval = static_cast<long>(t) % grid.intervals_per_day;
        if (table.rows[t][0] != std::to_string(day) ||
            table.rows[t][1] != std::to_string(interval))
            throw IoError(row_context(path, t + 2) + ": day/interval out of sequence");
    }
}

void append_time_row(std::vector<std::string>& row, long t, const TimeGrid& grid) {
    row.push_back(std::to_string(t / grid.intervals_per_day));
    row.push_back(std::to_string(t % grid.intervals_per_day));
}

}  // namespace

void write_profile_csv(const std::string& path, const HouseholdProfileTable& table) {
    const long length = table.grid.length();
    CsvTable csv;
    csv.header = {"day", "interval"};
    for (const auto& name : table.appliance_columns) csv.header.push_back(name);
    csv.header.push_back("consumption_kw");
    csv.header.push_back("solar_kw");
    csv.rows.reserve(static_cast<std::size_t>(length));
    for (long t = 0; t < length; ++t) {
        std::vector<std::string> row;
        row.reserve(csv.header.size());
        append_time_row(row, t, table.grid);
        for (const auto& name : table.appliance_columns)
            row.push_back(format_fixed9(table.appliance_kw.at(name)[static_cast<std::size_t>(t)]));
        row.push_back(format_fixed9(table.consumption_kw[static_cast<std::size_t>(t)]));
        row.push_back(format_fixed9(table.solar_kw[static_cast<std::size_t>(t)]));
        csv.rows.push_back(std::move(row));
    }
    write_csv(path, csv);
}

HouseholdProfileTable read_profile_csv(const std::string& path, const TimeGrid& grid) {
    const CsvTable csv = read_csv(path);
    check_time_columns(csv, grid, path);
    const std::size_t ncols = csv.header.size();
    if (ncols < 4 || csv.header[ncols - 2] != "consumption_kw" ||
        csv.header[ncols - 1] != "solar_kw")
        throw IoError(path + ": header must end with consumption_kw,solar_kw");
    HouseholdProfileTable table;
    table.grid = grid;
    const std::size_t length = csv.rows.size();
    for (std::size_t c = 2; c + 2 < ncols; ++c) {
        table.appliance_columns.push_back(csv.header[c]);
        table.appliance_kw[csv.header[c]].reserve(length);
    }
    table.consumption_kw.reserve(length);
    table.solar_kw.reserve(length);
    for (std::size_t t = 0; t < length; ++t) {
        const auto& row = csv.rows[t];
        const std::string where = row_context(path, t + 2);
        for (std::size_t c = 2; c + 2 < ncols; ++c)
            table.appliance_kw[csv.header[c]].push_back(parse_number(row[c], where));
        table.consumption_kw.push_back(parse_number(row[ncols - 2], where));
        table.solar_kw.push_back(parse_number(row[ncols - 1], where));
    }
    return table;
}

void write_tariff_csv(const std::string& path, const TariffSet& tariffs, const TimeGrid& grid) {
    std::vector<std::pair<std::string, const std::vector<double>*>> cols = {
        {"tou_per_kwh", &tariffs.tou},
        {"fit_per_kwh", &tariffs.fit},
        {"market_price_per_kwh", &tariffs.market_price}};
    write_series_csv(path, grid, cols);
}

TariffSet read_tariff_csv(const std::string& path, const TimeGrid& grid) {
    std::map<std::string, std::vector<double>> cols = read_series_csv(path, grid);
    const auto need = [&](const char* name) -> std::vector<double>& {
        auto it = cols.find(name);
        if (it == cols.end())
            throw IoError(path + ": missing column '" + std::string(name) + "'");
        return it->second;
    };
    TariffSet tariffs;
    tariffs.tou = std::move(need("tou_per_kwh"));
    tariffs.fit = std::move(need("fit_per_kwh"));
    tariffs.market_price = std::move(need("market_price_per_kwh"));
    validate(tariffs, grid);
    return tariffs;
}

void write_series_csv(const std::string& path, const TimeGrid& grid,
                      const std::vector<std::pair<std::string, const std::vector<double>*>>& cols) {
    const long length = grid.length();
    CsvTable csv;
    csv.header = {"day", "interval"};
    for (const auto& [name, values] : cols) {
        if (values->size() != static_cast<std::size_t>(length))
            throw LengthMismatch("write_series_csv('" + path + "'): column '" + name +
                                 "' does not match the grid");
        csv.header.push_back(name);
    }
    csv.rows.reserve(static_cast<std::size_t>(length));
    for (long t = 0; t < length; ++t) {
        std::vector<std::string> row;
        row.reserve(csv.header.size());
        append_time_row(row, t, grid);
        for (const auto& [name, values] : cols)
            row.push_back(format_fixed9((*values)[static_cast<std::size_t>(t)]));
        csv.rows.push_back(std::move(row));
    }
    write_csv(path, csv);
}

std::map<std::string, std::vector<double>> read_series_csv(const std::string& path,
                                                           const TimeGrid& grid) {
    const CsvTable csv = read_csv(path);
    check_time_columns(csv, grid, path);
    std::map<std::string, std::vector<double>> cols;
    for (std::size_t c = 2; c < csv.header.size(); ++c)
        cols[csv.header[c]].reserve(csv.rows.size());
    for (std::size_t t = 0; t < csv.rows.size(); ++t) {
        const std::string where = row_context(path, t + 2);
        for (std::size_t c = 2; c < csv.header.size(); ++c)
            cols[csv.header[c]].push_back(parse_number(csv.rows[t][c], where));
    }
    return cols;
}

}  // namespace bvpp
