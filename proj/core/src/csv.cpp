#include "parnn/csv.hpp"

#include "parnn/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace parnn {

namespace {

std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    std::size_t e = s.find_last_not_of(" \t\r\n");
    std::string out = s.substr(b, e - b + 1);
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
        out = out.substr(1, out.size() - 2);
    }
    return out;
}

std::vector<std::string> split_row(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.push_back("");
    }
    return cells;
}

double parse_number(const std::string &cell, long row, const std::string &column) {
    if (cell.empty()) {
        throw DataError("row " + std::to_string(row) + ": blank value in column '" +
                        column + "'");
    }
    const char *begin = cell.c_str();
    char *end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw DataError("row " + std::to_string(row) + ": cannot parse '" + cell +
                        "' in column '" + column + "' as a number");
    }
    return v;
}

} // namespace

TimeSeries load_csv(const DatasetSpec &spec) {
    std::ifstream in(spec.path);
    if (!in) {
        throw DataError("cannot open dataset file '" + spec.path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("dataset file '" + spec.path + "' is empty");
    }
    const std::vector<std::string> header = split_row(line);
    const auto col_it = std::find(header.begin(), header.end(), spec.value_column);
    if (col_it == header.end()) {
        throw DataError("dataset file '" + spec.path + "' has no column '" +
                        spec.value_column + "'");
    }
    const std::size_t col = static_cast<std::size_t>(col_it - header.begin());

    TimeSeries series;
    series.frequency = spec.frequency;
    series.seasonal_period = spec.seasonal_period;
    long row = 1; // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue; // tolerate a trailing newline
        }
        const std::vector<std::string> cells = split_row(line);
        if (col >= cells.size()) {
            throw DataError("row " + std::to_string(row) + ": missing column '" +
                            spec.value_column + "'");
        }
        series.values.push_back(parse_number(cells[col], row, spec.value_column));
    }
    if (series.values.empty()) {
        throw DataError("dataset file '" + spec.path + "' contains no data rows");
    }
    return series;
}

std::vector<DatasetSpec> load_registry(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open registry file '" + path + "'");
    }
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("registry file '" + path + "' is empty");
    }
    const std::vector<std::string> header = split_row(line);
    auto column = [&](const std::string &name) -> long {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<long>(it - header.begin());
    };
    const long c_name = column("name");
    const long c_path = column("path");
    const long c_freq = column("frequency");
    const long c_period = column("seasonal_period");
    const long c_value = column("value_column");
    const long c_date = column("date_column");
    if (c_name < 0 || c_path < 0 || c_freq < 0) {
        throw DataError("registry needs at least name, path and frequency columns");
    }

    std::vector<DatasetSpec> specs;
    long row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_row(line);
        auto cell = [&](long idx) -> std::string {
            return (idx >= 0 && idx < static_cast<long>(cells.size()))
                       ? cells[static_cast<std::size_t>(idx)]
                       : "";
        };
        DatasetSpec spec;
        spec.name = cell(c_name);
        spec.path = cell(c_path);
        if (spec.name.empty() || spec.path.empty()) {
            throw DataError("registry row " + std::to_string(row) +
                            ": name and path are required");
        }
        std::filesystem::path p(spec.path);
        if (p.is_relative()) {
            spec.path = (base / p).string();
        }
        try {
            spec.frequency = frequency_from_string(cell(c_freq));
        } catch (const std::invalid_argument &e) {
            throw DataError("registry row " + std::to_string(row) + ": " + e.what());
        }
        const std::string period = cell(c_period);
        spec.seasonal_period = period.empty()
                                   ? 1
                                   : static_cast<int>(parse_number(period, row,
                                                                   "seasonal_period"));
        if (!cell(c_value).empty()) {
            spec.value_column = cell(c_value);
        }
        if (!cell(c_date).empty()) {
            spec.date_column = cell(c_date);
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

} // namespace parnn
