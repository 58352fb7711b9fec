#pragma once

#include "parnn/series.hpp"

#include <string>
#include <vector>

namespace parnn {

struct DatasetSpec {
    std::string name;
    std::string path;
    Frequency frequency = Frequency::daily;
    int seasonal_period = 1;
    std::string value_column = "value";
    std::string date_column = "date";
};

/// Loads the value column of a headered CSV file in file order.
/// Throws DataError for a missing file, missing column, or any blank or
/// non-numeric cell (reported with its 1-based row number).
TimeSeries load_csv(const DatasetSpec &spec);

/// Dataset registry: a CSV with header
///   name,path,frequency,seasonal_period,value_column,date_column
/// Relative paths are resolved against the registry file's directory.
std::vector<DatasetSpec> load_registry(const std::string &path);

} // namespace parnn
