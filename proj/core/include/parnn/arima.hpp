#pragma once

#include "parnn/errors.hpp"
#include "parnn/series.hpp"

#include <vector>

namespace parnn {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;
};

/// ARIMA(p,d,q) fitted by conditional sum of squares on the d-differenced
/// series, using the sign convention
///   w_t = intercept + sum_i ar[i] * w_{t-i} + eps_t - sum_j ma[j] * eps_{t-j}.
/// The intercept is estimated only for d == 0; differencing already removes
/// the level, and forecasts of a plain random walk stay flat.
struct ArimaModel {
    ArimaOrder order;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double intercept = 0.0;
    double sigma2 = 0.0;
    double aic = 0.0;
    long n_effective = 0; // innovations entering the CSS objective
    bool ma_invertible = true;
    bool converged = true;
    bool degenerate_constant = false;

    /// One-step in-sample residuals on the original scale, aligned with the
    /// training series; the first d + p entries are zero.
    TimeSeries residuals;
    /// train - residuals, elementwise.
    TimeSeries fitted;

    // State retained for forecasting.
    std::vector<double> integration_tail; // last value at each differencing stage 0..d-1
    std::vector<double> diff_tail;        // trailing values of the differenced series
    std::vector<double> innovation_tail;  // trailing innovations

    /// n_effective * ln(sigma2) + 2 * (p + q + 1).
    double recompute_aic() const;
};

/// d-fold first differencing; output length = input length - d.
TimeSeries difference(const TimeSeries &series, int d);

/// Inverse of difference given the d initial values that were removed
/// (initial[k] is the first value at differencing stage k).
TimeSeries undifference(const TimeSeries &diffed, const std::vector<double> &initials);

struct KpssResult {
    double statistic = 0.0;
    bool reject_at_5pct = false;
    int lags = 0;
};

/// KPSS level-stationarity statistic with Bartlett/Newey-West long-run
/// variance, lag truncation floor(4*(n/100)^0.25). 5% critical value 0.463.
/// A constant series yields statistic 0 (no rejection).
KpssResult kpss_level_stat(const TimeSeries &series);

struct FitArimaOptions {
    int iteration_cap_per_param = 500; // Nelder-Mead cap = this * (p+q+1)
    double tolerance = 1e-8;
    /// Innovations are summed from max(p, q, condition_from). The automatic
    /// order search raises this to a common offset so candidate AICs are
    /// computed on identical subsamples; -1 keeps the per-order default.
    int condition_from = -1;
};

/// Estimation failure that still carries the best parameters found.
class ArimaEstimationError : public EstimationError {
public:
    ArimaEstimationError(const std::string &msg, ArimaModel best)
        : EstimationError(msg), best_(std::move(best)) {}
    const ArimaModel &best_so_far() const { return best_; }

private:
    ArimaModel best_;
};

/// Estimates an ArimaModel of fixed order by CSS. Throws EstimationError if
/// the optimizer hits its iteration cap without meeting the tolerance.
ArimaModel fit_arima(const TimeSeries &train, const ArimaOrder &order,
                     const FitArimaOptions &opts = {});

struct AutoArimaOptions {
    int max_p = 5;
    int max_q = 5;
    int max_d = 2;
    bool stepwise = true; // false = exhaustive (p,q) scan
    FitArimaOptions fit;
};

/// Automatic order selection: d = smallest order for which the KPSS test
/// stops rejecting, then a stepwise AIC neighborhood search over (p,q)
/// starting from (2,2) with moves of +-1 in each order plus the (0,0) cell.
ArimaModel auto_arima(const TimeSeries &train, const AutoArimaOptions &opts = {});

/// Recursive linear forecast: future innovations zero, known innovations
/// used for MA terms within reach, differencing undone by cumulative
/// summation with the stored initial values.
TimeSeries arima_forecast(const ArimaModel &model, int h);

/// CSS objective value at the model's stored parameters (exposed for the
/// monotone-improvement check in tests).
double arima_css(const ArimaModel &model, const TimeSeries &train);

} // namespace parnn
