#pragma once

#include "parnn/series.hpp"

#include <vector>

namespace parnn {

/// Inputs for scale-aware metrics: the in-sample series of length M used
/// for the naive-forecast denominator, the out-of-sample actuals and
/// predictions of length n, and the seasonal period S.
struct EvalContext {
    TimeSeries train;
    std::vector<double> actual;
    std::vector<double> predicted;
    int seasonal_period = 1;
};

/// Mean absolute scaled error:
///   sum |y_i - yhat_i| over the forecast window, divided by
///   (n / (M - S)) * sum_{i=S+1..M} |y_i - y_{i-S}|.
/// Throws MetricError when the seasonal-naive denominator is zero.
double mase(const EvalContext &ctx);

double rmse(const std::vector<double> &actual, const std::vector<double> &predicted);

/// Symmetric MAPE in percent, bounded by 200. Throws MetricError if some
/// index has |y_i| + |yhat_i| == 0.
double smape(const std::vector<double> &actual, const std::vector<double> &predicted);

} // namespace parnn
