#pragma once

#include "parnn/arima.hpp"
#include "parnn/network.hpp"
#include "parnn/series.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace parnn {

struct ParnnConfig {
    int max_p = 10;
    int max_q = 10;
    int reps = 500;      // ensemble size of the final model
    int grid_reps = 20;  // reduced ensemble size during grid search
    TrainConfig train_cfg;
    std::uint64_t base_seed = 0;
    AutoArimaOptions arima; // linear-stage order search bounds
    unsigned threads = 0;   // 0 = library default
};

/// Input/target location-scale statistics, estimated on the fitting split.
struct Standardization {
    double y_mean = 0.0;
    double y_scale = 1.0;
    double e_mean = 0.0;
    double e_scale = 1.0;
};

/// Hidden layer width rule: round-half-up of (p + q + 1) / 2.
int hidden_size(int p, int q);

struct TrainingPairs {
    Eigen::MatrixXd inputs;  // standardized rows (y_{t-1..t-p}, e_{t-1..t-q})
    Eigen::VectorXd targets; // standardized y_t
    Standardization stats;
    int first_target = 0; // index of the first target within y: max(p, q)
};

/// Combined lag design over the series and the linear-stage residuals.
/// Requires p, q >= 1 and len(y) == len(e) > max(p, q).
TrainingPairs build_training_pairs(const std::vector<double> &y,
                                   const std::vector<double> &e, int p, int q);

/// Two-stage hybrid model: an ARIMA stage plus an averaged ensemble of
/// networks fed with p lags of the series and q lags of the ARIMA
/// residuals.
struct ParnnModel {
    ArimaModel arima;
    int p = 1;
    int q = 1;
    int k = 1;
    std::vector<NetworkWeights> ensemble;
    Standardization standardization;
    /// Std. dev. of in-sample ensemble-mean one-step errors on the
    /// Box-Cox(0.5) scale; drives interval simulation.
    double residual_sigma = 0.0;
    double validation_mase = std::numeric_limits<double>::quiet_NaN();
    BoxCoxParam boxcox;
    int diverged_members = 0;

    // Fitting-sample state needed to forecast forward.
    std::vector<double> y_tail; // last p observations
    std::vector<double> e_tail; // last q residuals
    std::vector<double> insample_pred; // ensemble-mean one-step fits, from max(p,q)
    Frequency frequency = Frequency::daily;
    int seasonal_period = 1;
    long end_index = 0;

    /// Ensemble-mean one-step output for the given recent windows
    /// (y_recent.back() = y_{t-1}, e_recent.back() = e_{t-1}).
    double one_step(const std::vector<double> &y_recent,
                    const std::vector<double> &e_recent) const;
};

/// Fits the two stages on `train` with fixed network lags (p, q):
/// auto-ARIMA first, then cfg.reps networks seeded base_seed + 0..reps-1.
/// Throws EstimationError when more than 10% of members diverge.
ParnnModel fit_fixed(const TimeSeries &train, int p, int q, const ParnnConfig &cfg);

/// Same, but reuses an already-fitted linear stage (the stage does not
/// depend on p or q, so grid search fits it once).
ParnnModel fit_fixed(const TimeSeries &train, const ArimaModel &stage1, int p, int q,
                     const ParnnConfig &cfg, int reps, std::uint64_t seed_base);

struct GridSearchResult {
    int p = 0;
    int q = 0;
    /// Validation MASE per cell, NaN where the cell was infeasible.
    Eigen::MatrixXd mase_table; // max_p x max_q, (p-1, q-1) indexed
};

/// Scores every (p, q) in [1, max_p] x [1, max_q] on the validation split
/// and returns the argmin cell; ties break toward smaller p + q, then
/// smaller p. The scorer is injectable for tests; the default fits a
/// grid_reps-member model on train and scores MASE on validation.
GridSearchResult grid_search(const TimeSeries &train, const TimeSeries &validation,
                             const ParnnConfig &cfg,
                             const std::function<double(int, int)> &scorer = {});

/// Iterated one-step forecasts: each step feeds the previous output back
/// into the lag window; unobserved future residuals enter as zero.
TimeSeries forecast_recursive(const ParnnModel &model, int h);

} // namespace parnn
