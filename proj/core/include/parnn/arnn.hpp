#pragma once

#include "parnn/network.hpp"
#include "parnn/series.hpp"

#include <cstdint>
#include <vector>

namespace parnn {

struct ArnnConfig {
    int max_p = 10;
    int reps = 500;
    TrainConfig train_cfg;
    std::uint64_t base_seed = 0;
    unsigned threads = 0;
};

/// Plain autoregressive network baseline: p lags of the series through
/// k = round-half-up((p+1)/2) sigmoid units, averaged over an ensemble.
struct ArnnModel {
    int p = 1;
    int k = 1;
    std::vector<NetworkWeights> ensemble;
    double y_mean = 0.0;
    double y_scale = 1.0;
    double proxy_aic = 0.0; // AIC of the linear AR used to pick p
    std::vector<double> y_tail;
    Frequency frequency = Frequency::daily;
    int seasonal_period = 1;
    long end_index = 0;
};

/// Chooses p in [1, max_p] by the AIC of a linear AR fitted on a common
/// sample, then trains the network ensemble on the embedded lags.
ArnnModel fit_arnn(const TimeSeries &train, const ArnnConfig &cfg);

TimeSeries arnn_forecast(const ArnnModel &model, int h);

} // namespace parnn
