#include "parnn/parnn.hpp"

#include "parnn/errors.hpp"
#include "parnn/metrics.hpp"
#include "parnn/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace parnn {

int hidden_size(int p, int q) {
    if (p < 0 || q < 0) {
        throw std::invalid_argument("lag orders must be nonnegative");
    }
    return (p + q + 2) / 2;
}

namespace {

void mean_and_scale(const std::vector<double> &v, double *mean, double *scale) {
    const double n = static_cast<double>(v.size());
    double m = 0.0;
    for (double x : v) m += x;
    m /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    double sd = n > 1.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    *mean = m;
    *scale = sd > 0.0 ? sd : 1.0;
}

} // namespace

TrainingPairs build_training_pairs(const std::vector<double> &y,
                                   const std::vector<double> &e, int p, int q) {
    if (p < 1 || q < 1) {
        throw std::invalid_argument("network lag orders p and q must be >= 1");
    }
    if (y.size() != e.size()) {
        throw SizingError("series and residual lengths differ: " +
                          std::to_string(y.size()) + " vs " + std::to_string(e.size()));
    }
    const long n = static_cast<long>(y.size());
    const int lead = std::max(p, q);
    if (n <= lead) {
        throw SizingError("need more than max(p, q) = " + std::to_string(lead) +
                          " observations, got " + std::to_string(n));
    }

    TrainingPairs pairs;
    pairs.first_target = lead;
    mean_and_scale(y, &pairs.stats.y_mean, &pairs.stats.y_scale);
    mean_and_scale(e, &pairs.stats.e_mean, &pairs.stats.e_scale);

    const long rows = n - lead;
    pairs.inputs.resize(rows, p + q);
    pairs.targets.resize(rows);
    for (long t = lead; t < n; ++t) {
        const long r = t - lead;
        for (int i = 1; i <= p; ++i) {
            pairs.inputs(r, i - 1) =
                (y[static_cast<std::size_t>(t - i)] - pairs.stats.y_mean) /
                pairs.stats.y_scale;
        }
        for (int j = 1; j <= q; ++j) {
            pairs.inputs(r, p + j - 1) =
                (e[static_cast<std::size_t>(t - j)] - pairs.stats.e_mean) /
                pairs.stats.e_scale;
        }
        pairs.targets(r) =
            (y[static_cast<std::size_t>(t)] - pairs.stats.y_mean) / pairs.stats.y_scale;
    }
    return pairs;
}

double ParnnModel::one_step(const std::vector<double> &y_recent,
                            const std::vector<double> &e_recent) const {
    if (static_cast<int>(y_recent.size()) < p || static_cast<int>(e_recent.size()) < q) {
        throw SizingError("one_step needs at least p recent observations and q residuals");
    }
    Eigen::VectorXd x(p + q);
    for (int i = 1; i <= p; ++i) {
        x(i - 1) = (y_recent[y_recent.size() - i] - standardization.y_mean) /
                   standardization.y_scale;
    }
    for (int j = 1; j <= q; ++j) {
        x(p + j - 1) = (e_recent[e_recent.size() - j] - standardization.e_mean) /
                       standardization.e_scale;
    }
    double sum = 0.0;
    for (const NetworkWeights &net : ensemble) {
        sum += forward(net, x);
    }
    const double out = sum / static_cast<double>(ensemble.size());
    return out * standardization.y_scale + standardization.y_mean;
}

ParnnModel fit_fixed(const TimeSeries &train, const ArimaModel &stage1, int p, int q,
                     const ParnnConfig &cfg, int reps, std::uint64_t seed_base) {
    if (reps < 1) {
        throw std::invalid_argument("ensemble size must be >= 1");
    }
    TrainingPairs pairs = build_training_pairs(train.values, stage1.residuals.values, p, q);

    ParnnModel model;
    model.arima = stage1;
    model.p = p;
    model.q = q;
    model.k = hidden_size(p, q);
    model.standardization = pairs.stats;
    model.frequency = train.frequency;
    model.seasonal_period = train.seasonal_period;
    model.end_index = train.origin_index + static_cast<long>(train.size());

    // Members train independently on deterministic per-member seeds and are
    // reduced in index order, so the result does not depend on thread count.
    std::vector<NetworkWeights> members(static_cast<std::size_t>(reps));
    std::vector<char> diverged(static_cast<std::size_t>(reps), 0);
    parallel_for(
        static_cast<std::size_t>(reps),
        [&](std::size_t i) {
            NetworkWeights net = init_network(p + q, model.k,
                                              seed_base + static_cast<std::uint64_t>(i),
                                              cfg.train_cfg.init_scale);
            try {
                members[i] = backprop_train(std::move(net), pairs.inputs, pairs.targets,
                                            cfg.train_cfg);
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
    model.diverged_members = failed;
    if (failed * 10 > reps) {
        throw EstimationError("PARNN(" + std::to_string(p) + "," +
                              std::to_string(model.k) + "," + std::to_string(q) + "): " +
                              std::to_string(failed) + " of " + std::to_string(reps) +
                              " ensemble members diverged");
    }

    // Ensemble-mean one-step fits, for the interval noise scale.
    Eigen::VectorXd mean_pred = Eigen::VectorXd::Zero(pairs.inputs.rows());
    for (const NetworkWeights &net : model.ensemble) {
        mean_pred += forward_batch(net, pairs.inputs);
    }
    mean_pred /= static_cast<double>(model.ensemble.size());

    model.boxcox.lambda = 0.5;
    model.boxcox.shift = boxcox_shift_for(train.values);

    model.insample_pred.resize(static_cast<std::size_t>(mean_pred.size()));
    const double bc_floor = -model.boxcox.shift;
    double err_sum = 0.0, err_sq = 0.0;
    long err_n = 0;
    for (long r = 0; r < mean_pred.size(); ++r) {
        const double pred =
            mean_pred(r) * pairs.stats.y_scale + pairs.stats.y_mean;
        model.insample_pred[static_cast<std::size_t>(r)] = pred;
        const double actual = train.values[static_cast<std::size_t>(r + pairs.first_target)];
        // Clamp fitted values that fall outside the transform domain.
        const double safe_pred = std::max(pred, bc_floor + 1e-9);
        const double err = boxcox_transform_value(actual, model.boxcox) -
                           boxcox_transform_value(safe_pred, model.boxcox);
        err_sum += err;
        err_sq += err * err;
        ++err_n;
    }
    if (err_n > 1) {
        const double mean = err_sum / static_cast<double>(err_n);
        const double var =
            (err_sq - static_cast<double>(err_n) * mean * mean) /
            static_cast<double>(err_n - 1);
        model.residual_sigma = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    if (model.residual_sigma <= 0.0) {
        model.residual_sigma = std::numeric_limits<double>::min();
    }

    model.y_tail.assign(train.values.end() - p, train.values.end());
    model.e_tail.assign(stage1.residuals.values.end() - q, stage1.residuals.values.end());
    return model;
}

ParnnModel fit_fixed(const TimeSeries &train, int p, int q, const ParnnConfig &cfg) {
    train.validate();
    ArimaModel stage1 = auto_arima(train, cfg.arima);
    return fit_fixed(train, stage1, p, q, cfg, cfg.reps, cfg.base_seed);
}

GridSearchResult grid_search(const TimeSeries &train, const TimeSeries &validation,
                             const ParnnConfig &cfg,
                             const std::function<double(int, int)> &scorer) {
    if (validation.empty()) {
        throw SizingError("grid search requires a nonempty validation split");
    }
    if (cfg.max_p < 1 || cfg.max_q < 1) {
        throw std::invalid_argument("max_p and max_q must be >= 1");
    }

    GridSearchResult result;
    result.mase_table.setConstant(cfg.max_p, cfg.max_q,
                                  std::numeric_limits<double>::quiet_NaN());

    std::function<double(int, int)> score = scorer;
    ArimaModel stage1;
    if (!score) {
        train.validate();
        stage1 = auto_arima(train, cfg.arima);
        const int h = static_cast<int>(validation.size());
        ParnnConfig cell_cfg = cfg;
        cell_cfg.threads = 1; // cells are already parallel
        score = [&train, &validation, stage1, h, cell_cfg, &cfg](int p, int q) {
            const std::uint64_t cell_index =
                static_cast<std::uint64_t>((p - 1) * cfg.max_q + (q - 1));
            ParnnModel cell =
                fit_fixed(train, stage1, p, q, cell_cfg, cfg.grid_reps,
                          cfg.base_seed + cell_index * static_cast<std::uint64_t>(
                                                           cfg.grid_reps));
            TimeSeries fc = forecast_recursive(cell, h);
            EvalContext ctx;
            ctx.train = train;
            ctx.actual = validation.values;
            ctx.predicted = fc.values;
            ctx.seasonal_period = train.seasonal_period;
            return mase(ctx);
        };
    }

    const std::size_t cells = static_cast<std::size_t>(cfg.max_p) *
                              static_cast<std::size_t>(cfg.max_q);
    parallel_for(
        cells,
        [&](std::size_t idx) {
            const int p = static_cast<int>(idx) / cfg.max_q + 1;
            const int q = static_cast<int>(idx) % cfg.max_q + 1;
            try {
                result.mase_table(p - 1, q - 1) = score(p, q);
            } catch (const std::exception &) {
                // infeasible cell, stays NaN
            }
        },
        cfg.threads);

    bool found = false;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= cfg.max_p; ++p) {
        for (int q = 1; q <= cfg.max_q; ++q) {
            const double v = result.mase_table(p - 1, q - 1);
            if (!std::isfinite(v)) {
                continue;
            }
            const bool better =
                v < best ||
                (v == best && (p + q < result.p + result.q ||
                               (p + q == result.p + result.q && p < result.p)));
            if (!found || better) {
                best = v;
                result.p = p;
                result.q = q;
                found = true;
            }
        }
    }
    if (!found) {
        throw SearchError("grid search: no feasible (p, q) cell");
    }
    return result;
}

TimeSeries forecast_recursive(const ParnnModel &model, int h) {
    if (h < 1) {
        throw std::invalid_argument("forecast horizon must be positive");
    }
    std::vector<double> y_hist = model.y_tail;
    std::vector<double> e_hist = model.e_tail;
    TimeSeries out;
    out.values.reserve(static_cast<std::size_t>(h));
    for (int step = 0; step < h; ++step) {
        const double yhat = model.one_step(y_hist, e_hist);
        out.values.push_back(yhat);
        y_hist.push_back(yhat);
        e_hist.push_back(0.0); // future residuals take the innovation mean
    }
    out.frequency = model.frequency;
    out.seasonal_period = model.seasonal_period;
    out.origin_index = model.end_index;
    return out;
}

} // namespace parnn
