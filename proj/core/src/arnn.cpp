#include "parnn/arnn.hpp"

#include "parnn/errors.hpp"
#include "parnn/parallel.hpp"
#include "parnn/parnn.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace parnn {

namespace {

/// AIC of a linear AR(p) with intercept, ordinary least squares, evaluated
/// on the common sample that starts after max_p observations so candidates
/// share their targets.
double linear_ar_aic(const std::vector<double> &y, int p, int max_p) {
    const long n = static_cast<long>(y.size());
    const long rows = n - max_p;
    Eigen::MatrixXd design(rows, p + 1);
    Eigen::VectorXd target(rows);
    for (long t = max_p; t < n; ++t) {
        design(t - max_p, 0) = 1.0;
        for (int i = 1; i <= p; ++i) {
            design(t - max_p, i) = y[static_cast<std::size_t>(t - i)];
        }
        target(t - max_p) = y[static_cast<std::size_t>(t)];
    }
    const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    const double rss = (target - design * beta).squaredNorm();
    const double sigma2 =
        std::max(rss / static_cast<double>(rows), std::numeric_limits<double>::epsilon());
    return static_cast<double>(rows) * std::log(sigma2) + 2.0 * (p + 1);
}

} // namespace

ArnnModel fit_arnn(const TimeSeries &train, const ArnnConfig &cfg) {
    train.validate();
    if (cfg.reps < 1) {
        throw std::invalid_argument("ensemble size must be >= 1");
    }
    const long n = static_cast<long>(train.size());
    int max_p = cfg.max_p;
    while (max_p > 1 && n - max_p < max_p + 2) {
        --max_p; // shrink the candidate range on short series
    }
    if (n <= max_p + 1) {
        throw SizingError("series of length " + std::to_string(n) +
                          " is too short for an ARNN fit");
    }

    ArnnModel model;
    model.proxy_aic = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= max_p; ++p) {
        const double aic = linear_ar_aic(train.values, p, max_p);
        if (aic < model.proxy_aic) {
            model.proxy_aic = aic;
            model.p = p;
        }
    }
    model.k = hidden_size(model.p, 0);

    LagEmbedding emb = lag_embed(train, model.p);
    double mean = 0.0;
    for (double v : train.values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : train.values) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    model.y_mean = mean;
    model.y_scale = sd > 0.0 ? sd : 1.0;

    Eigen::MatrixXd X =
        (emb.inputs.array() - model.y_mean) / model.y_scale;
    Eigen::VectorXd y = (emb.targets.array() - model.y_mean) / model.y_scale;

    std::vector<NetworkWeights> members(static_cast<std::size_t>(cfg.reps));
    std::vector<char> diverged(static_cast<std::size_t>(cfg.reps), 0);
    parallel_for(
        static_cast<std::size_t>(cfg.reps),
        [&](std::size_t i) {
            NetworkWeights net =
                init_network(model.p, model.k,
                             cfg.base_seed + static_cast<std::uint64_t>(i),
                             cfg.train_cfg.init_scale);
            try {
                members[i] = backprop_train(std::move(net), X, y, cfg.train_cfg);
            } catch (const DivergenceError &) {
                diverged[i] = 1;
            }
        },
        cfg.threads);
    int failed = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (diverged[i]) {
            ++failed;
        } else {
            model.ensemble.push_back(std::move(members[i]));
        }
    }
    if (failed * 10 > cfg.reps) {
        throw EstimationError("ARNN(" + std::to_string(model.p) + "," +
                              std::to_string(model.k) + "): " + std::to_string(failed) +
                              " of " + std::to_string(cfg.reps) +
                              " ensemble members diverged");
    }

    model.y_tail.assign(train.values.end() - model.p, train.values.end());
    model.frequency = train.frequency;
    model.seasonal_period = train.seasonal_period;
    model.end_index = train.origin_index + n;
    return model;
}

TimeSeries arnn_forecast(const ArnnModel &model, int h) {
    if (h < 1) {
        throw std::invalid_argument("forecast horizon must be positive");
    }
    std::vector<double> hist = model.y_tail;
    TimeSeries out;
    out.values.reserve(static_cast<std::size_t>(h));
    Eigen::VectorXd x(model.p);
    for (int step = 0; step < h; ++step) {
        for (int i = 1; i <= model.p; ++i) {
            x(i - 1) = (hist[hist.size() - i] - model.y_mean) / model.y_scale;
        }
        double sum = 0.0;
        for (const NetworkWeights &net : model.ensemble) {
            sum += forward(net, x);
        }
        const double yhat =
            (sum / static_cast<double>(model.ensemble.size())) * model.y_scale +
            model.y_mean;
        out.values.push_back(yhat);
        hist.push_back(yhat);
    }
    out.frequency = model.frequency;
    out.seasonal_period = model.seasonal_period;
    out.origin_index = model.end_index;
    return out;
}

} // namespace parnn
