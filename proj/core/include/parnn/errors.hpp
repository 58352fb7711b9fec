#pragma once

#include <stdexcept>
#include <string>

namespace parnn {

/// Input too short (or otherwise mis-sized) for the requested operation.
class SizingError : public std::invalid_argument {
public:
    explicit SizingError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// Vector/matrix dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string &msg) : std::invalid_argument(msg) {}
};

/// Numerical estimation failed (optimizer cap hit, all candidate fits failed, ...).
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Training loss became non-finite; carries the epoch where it happened.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string &msg, int epoch)
        : std::runtime_error(msg), epoch_(epoch) {}
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

/// Accuracy metric is undefined for the given inputs (e.g. zero MASE denominator).
class MetricError : public std::runtime_error {
public:
    explicit MetricError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Grid search found no feasible cell.
class SearchError : public std::runtime_error {
public:
    explicit SearchError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Problem reading or parsing an input file.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace parnn
