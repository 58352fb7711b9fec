#include "parnn/metrics.hpp"

#include "parnn/errors.hpp"

#include <cmath>

namespace parnn {

namespace {

void check_lengths(const std::vector<double> &actual, const std::vector<double> &predicted) {
    if (actual.size() != predicted.size()) {
        throw ShapeError("actual and predicted lengths differ: " +
                         std::to_string(actual.size()) + " vs " +
                         std::to_string(predicted.size()));
    }
    if (actual.empty()) {
        throw SizingError("metric requires at least one forecast point");
    }
}

} // namespace

double mase(const EvalContext &ctx) {
    check_lengths(ctx.actual, ctx.predicted);
    const long big_m = static_cast<long>(ctx.train.size());
    const int s = ctx.seasonal_period;
    if (s < 1) {
        throw std::invalid_argument("seasonal_period must be >= 1");
    }
    if (big_m <= s) {
        throw SizingError("training series length must exceed the seasonal period");
    }

    double naive_abs_sum = 0.0;
    for (long i = s; i < big_m; ++i) {
        naive_abs_sum += std::abs(ctx.train.values[static_cast<std::size_t>(i)] -
                                  ctx.train.values[static_cast<std::size_t>(i - s)]);
    }
    if (naive_abs_sum == 0.0) {
        throw MetricError("MASE undefined: seasonal-naive denominator is zero "
                          "(constant training series)");
    }

    const double n = static_cast<double>(ctx.actual.size());
    double err_sum = 0.0;
    for (std::size_t i = 0; i < ctx.actual.size(); ++i) {
        err_sum += std::abs(ctx.actual[i] - ctx.predicted[i]);
    }
    const double denom = (n / static_cast<double>(big_m - s)) * naive_abs_sum;
    return err_sum / denom;
}

double rmse(const std::vector<double> &actual, const std::vector<double> &predicted) {
    check_lengths(actual, predicted);
    double sq_sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double d = actual[i] - predicted[i];
        sq_sum += d * d;
    }
    return std::sqrt(sq_sum / static_cast<double>(actual.size()));
}

double smape(const std::vector<double> &actual, const std::vector<double> &predicted) {
    check_lengths(actual, predicted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double scale = (std::abs(actual[i]) + std::abs(predicted[i])) / 2.0;
        if (scale == 0.0) {
            throw MetricError("SMAPE undefined: actual and predicted both zero at index " +
                              std::to_string(i));
        }
        sum += std::abs(actual[i] - predicted[i]) / scale;
    }
    return 100.0 * sum / static_cast<double>(actual.size());
}

} // namespace parnn
