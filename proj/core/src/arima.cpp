#include "parnn/arima.hpp"

#include "parnn/optim.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace parnn {

namespace {

constexpr double kKpss5pctCritical = 0.463;

bool is_constant(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

/// Innovation recursion on the differenced series. Innovations before index
/// p are conditioned out (set to zero); the CSS objective sums squares from
/// index max(p, q).
struct CssEval {
    double css = 0.0;
    std::vector<double> innovations;
};

CssEval css_innovations(const std::vector<double> &w, int p, int q, double intercept,
                        const double *ar, const double *ma, int condition_from = -1) {
    const long m = static_cast<long>(w.size());
    CssEval out;
    out.innovations.assign(w.size(), 0.0);
    const long s0 = std::max<long>(std::max(p, q), condition_from);
    for (long s = p; s < m; ++s) {
        double pred = intercept;
        for (int i = 1; i <= p; ++i) {
            pred += ar[i - 1] * w[static_cast<std::size_t>(s - i)];
        }
        for (int j = 1; j <= q; ++j) {
            if (s - j >= 0) {
                pred -= ma[j - 1] * out.innovations[static_cast<std::size_t>(s - j)];
            }
        }
        const double eps = w[static_cast<std::size_t>(s)] - pred;
        out.innovations[static_cast<std::size_t>(s)] = eps;
        if (s >= s0) {
            out.css += eps * eps;
        }
    }
    return out;
}

/// Exact CSS minimizer for pure AR models: ordinary least squares of w_t on
/// its lags (plus intercept when requested).
std::vector<double> ols_ar(const std::vector<double> &w, int p, bool with_intercept,
                           double *intercept_out, int condition_from = -1) {
    const long m = static_cast<long>(w.size());
    const long start = std::max<long>(p, condition_from);
    const long rows = m - start;
    const int cols = p + (with_intercept ? 1 : 0);
    if (cols == 0 || rows < 1) {
        if (intercept_out) *intercept_out = 0.0;
        return std::vector<double>(static_cast<std::size_t>(p), 0.0);
    }
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (long s = start; s < m; ++s) {
        int c = 0;
        if (with_intercept) {
            design(s - start, c++) = 1.0;
        }
        for (int i = 1; i <= p; ++i) {
            design(s - start, c++) = w[static_cast<std::size_t>(s - i)];
        }
        target(s - start) = w[static_cast<std::size_t>(s)];
    }
    Eigen::VectorXd beta = design.colPivHouseholderQr().solve(target);
    int c = 0;
    double intercept = 0.0;
    if (with_intercept) {
        intercept = beta(c++);
    }
    std::vector<double> ar(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        ar[static_cast<std::size_t>(i)] = beta(c++);
    }
    if (intercept_out) *intercept_out = intercept;
    return ar;
}

/// Smallest root modulus of the lag polynomial 1 - c_1 z - ... - c_m z^m.
/// The reversed monic polynomial z^m - c_1 z^{m-1} - ... - c_m has the
/// reciprocal roots, so this is 1 / max |eigenvalue| of its companion
/// matrix. Returns +inf for an all-zero (or empty) coefficient vector.
double min_root_modulus(const std::vector<double> &coeffs) {
    int m = static_cast<int>(coeffs.size());
    while (m > 0 && coeffs[static_cast<std::size_t>(m - 1)] == 0.0) {
        --m; // trailing zeros only add reciprocal roots at 0
    }
    if (m == 0) {
        return std::numeric_limits<double>::infinity();
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        companion(0, j) = coeffs[static_cast<std::size_t>(j)];
    }
    for (int i = 1; i < m; ++i) {
        companion(i, i - 1) = 1.0;
    }
    const auto eigenvalues = companion.eigenvalues();
    double max_mod = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        max_mod = std::max(max_mod, std::abs(eigenvalues(i)));
    }
    return max_mod == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / max_mod;
}

bool ma_polynomial_invertible(const std::vector<double> &ma) {
    return min_root_modulus(ma) > 1.0 + 1e-12;
}

std::vector<double> difference_once(const std::vector<double> &v) {
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) {
        out.push_back(v[i] - v[i - 1]);
    }
    return out;
}

ArimaModel degenerate_constant_model(const TimeSeries &train, int d) {
    ArimaModel model;
    model.order = {0, d, 0};
    model.intercept = train.values.front();
    model.sigma2 = std::numeric_limits<double>::epsilon();
    model.n_effective = static_cast<long>(train.size()) - d;
    model.aic = model.recompute_aic();
    model.degenerate_constant = true;
    model.residuals = train;
    std::fill(model.residuals.values.begin(), model.residuals.values.end(), 0.0);
    model.fitted = train;
    model.integration_tail.assign(static_cast<std::size_t>(d), 0.0);
    std::vector<double> stage = train.values;
    for (int k = 0; k < d; ++k) {
        model.integration_tail[static_cast<std::size_t>(k)] = stage.back();
        stage = difference_once(stage);
    }
    return model;
}

} // namespace

double ArimaModel::recompute_aic() const {
    return static_cast<double>(n_effective) * std::log(sigma2) +
           2.0 * static_cast<double>(order.p + order.q + 1);
}

TimeSeries difference(const TimeSeries &series, int d) {
    if (d < 0) {
        throw std::invalid_argument("differencing order must be nonnegative");
    }
    if (static_cast<long>(series.size()) <= d) {
        throw SizingError("series of length " + std::to_string(series.size()) +
                          " cannot be differenced " + std::to_string(d) + " times");
    }
    TimeSeries out = series;
    for (int k = 0; k < d; ++k) {
        out.values = difference_once(out.values);
    }
    out.origin_index = series.origin_index + d;
    return out;
}

TimeSeries undifference(const TimeSeries &diffed, const std::vector<double> &initials) {
    TimeSeries out = diffed;
    for (auto it = initials.rbegin(); it != initials.rend(); ++it) {
        std::vector<double> rebuilt;
        rebuilt.reserve(out.values.size() + 1);
        rebuilt.push_back(*it);
        for (double dv : out.values) {
            rebuilt.push_back(rebuilt.back() + dv);
        }
        out.values = std::move(rebuilt);
        out.origin_index -= 1;
    }
    return out;
}

KpssResult kpss_level_stat(const TimeSeries &series) {
    const long n = static_cast<long>(series.size());
    if (n < 10) {
        throw SizingError("KPSS test requires at least 10 observations, got " +
                          std::to_string(n));
    }
    const double mean =
        std::accumulate(series.values.begin(), series.values.end(), 0.0) /
        static_cast<double>(n);

    std::vector<double> e(series.values.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        e[i] = series.values[i] - mean;
    }

    double partial = 0.0;
    double s_sq_sum = 0.0;
    double gamma0 = 0.0;
    for (double ei : e) {
        partial += ei;
        s_sq_sum += partial * partial;
        gamma0 += ei * ei;
    }
    gamma0 /= static_cast<double>(n);

    KpssResult res;
    res.lags = static_cast<int>(std::floor(
        4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (gamma0 == 0.0) {
        // constant series: zero numerator and denominator, defined as 0
        return res;
    }

    double lrv = gamma0;
    for (int lag = 1; lag <= res.lags; ++lag) {
        double gamma = 0.0;
        for (long t = lag; t < n; ++t) {
            gamma += e[static_cast<std::size_t>(t)] * e[static_cast<std::size_t>(t - lag)];
        }
        gamma /= static_cast<double>(n);
        const double weight =
            1.0 - static_cast<double>(lag) / (static_cast<double>(res.lags) + 1.0);
        lrv += 2.0 * weight * gamma;
    }
    if (lrv <= 0.0) {
        lrv = gamma0;
    }

    res.statistic = s_sq_sum / (static_cast<double>(n) * static_cast<double>(n) * lrv);
    res.reject_at_5pct = res.statistic > kKpss5pctCritical;
    return res;
}

ArimaModel fit_arima(const TimeSeries &train, const ArimaOrder &order,
                     const FitArimaOptions &opts) {
    train.validate();
    const int p = order.p;
    const int d = order.d;
    const int q = order.q;
    if (p < 0 || d < 0 || q < 0) {
        throw std::invalid_argument("ARIMA orders must be nonnegative");
    }
    const long n = static_cast<long>(train.size());
    if (n <= d + std::max(p, q) + 1) {
        throw SizingError("training series of length " + std::to_string(n) +
                          " is too short for ARIMA(" + std::to_string(p) + "," +
                          std::to_string(d) + "," + std::to_string(q) + ")");
    }

    if (is_constant(train.values)) {
        return degenerate_constant_model(train, d);
    }

    // Difference d times, keeping the trailing value of every stage for
    // forecast re-integration.
    std::vector<double> integration_tail(static_cast<std::size_t>(d));
    std::vector<double> w = train.values;
    for (int k = 0; k < d; ++k) {
        integration_tail[static_cast<std::size_t>(k)] = w.back();
        w = difference_once(w);
    }
    const long m = static_cast<long>(w.size());
    const bool with_intercept = (d == 0);
    const int s0 = std::max({p, q, opts.condition_from});
    if (m <= s0 + 1) {
        throw SizingError("training series too short for the requested conditioning");
    }

    ArimaModel model;
    model.order = order;
    model.integration_tail = std::move(integration_tail);
    model.ar_coeffs.assign(static_cast<std::size_t>(p), 0.0);
    model.ma_coeffs.assign(static_cast<std::size_t>(q), 0.0);
    model.n_effective = m - s0;

    double init_intercept = 0.0;
    std::vector<double> init_ar =
        ols_ar(w, p, with_intercept, &init_intercept, opts.condition_from);

    if (q == 0) {
        // Pure AR CSS is linear least squares; the OLS solution is exact.
        model.ar_coeffs = init_ar;
        model.intercept = with_intercept ? init_intercept : 0.0;
    } else {
        std::vector<double> start;
        start.insert(start.end(), init_ar.begin(), init_ar.end());
        start.insert(start.end(), static_cast<std::size_t>(q), 0.0);
        if (with_intercept) {
            start.push_back(init_intercept);
        }

        auto objective = [&](const std::vector<double> &theta) {
            const double *ar = theta.data();
            const double *ma = theta.data() + p;
            const double intercept = with_intercept ? theta[theta.size() - 1] : 0.0;
            return css_innovations(w, p, q, intercept, ar, ma, opts.condition_from).css;
        };

        SimplexOptions nm;
        nm.max_iterations = opts.iteration_cap_per_param * (p + q + 1);
        nm.tolerance = opts.tolerance;
        SimplexResult sol = nelder_mead(objective, start, nm);

        std::copy(sol.x.begin(), sol.x.begin() + p, model.ar_coeffs.begin());
        std::copy(sol.x.begin() + p, sol.x.begin() + p + q, model.ma_coeffs.begin());
        model.intercept = with_intercept ? sol.x.back() : 0.0;
        model.converged = sol.converged;
    }

    CssEval eval = css_innovations(w, p, q, model.intercept, model.ar_coeffs.data(),
                                   model.ma_coeffs.data(), opts.condition_from);
    model.sigma2 = eval.css / static_cast<double>(model.n_effective);
    if (model.sigma2 <= 0.0) {
        model.sigma2 = std::numeric_limits<double>::epsilon();
    }
    model.aic = model.recompute_aic();
    model.ma_invertible = ma_polynomial_invertible(model.ma_coeffs);

    model.residuals = train;
    std::fill(model.residuals.values.begin(), model.residuals.values.end(), 0.0);
    for (long s = p; s < m; ++s) {
        model.residuals.values[static_cast<std::size_t>(s + d)] =
            eval.innovations[static_cast<std::size_t>(s)];
    }
    model.fitted = train;
    for (std::size_t t = 0; t < model.fitted.values.size(); ++t) {
        model.fitted.values[t] = train.values[t] - model.residuals.values[t];
    }

    const long keep_w = std::max<long>(p, 1);
    const long keep_e = std::max<long>(q, 1);
    model.diff_tail.assign(w.end() - std::min<long>(keep_w, m), w.end());
    model.innovation_tail.assign(eval.innovations.end() - std::min<long>(keep_e, m),
                                 eval.innovations.end());

    if (!model.converged) {
        throw ArimaEstimationError(
            "ARIMA(" + std::to_string(p) + "," + std::to_string(d) + "," +
                std::to_string(q) + ") optimizer hit its iteration cap before converging",
            model);
    }
    return model;
}

ArimaModel auto_arima(const TimeSeries &train, const AutoArimaOptions &opts) {
    train.validate();

    int d = 0;
    {
        TimeSeries work = train;
        for (; d < opts.max_d; ++d) {
            if (static_cast<long>(work.size()) < 10) {
                break;
            }
            if (!kpss_level_stat(work).reject_at_5pct) {
                break;
            }
            work = difference(work, 1);
        }
    }

    std::map<std::pair<int, int>, double> tried;
    std::map<std::pair<int, int>, ArimaModel> fits;

    auto evaluate = [&](int p, int q) -> double {
        if (p < 0 || q < 0 || p > opts.max_p || q > opts.max_q) {
            return std::numeric_limits<double>::infinity();
        }
        const auto key = std::make_pair(p, q);
        auto it = tried.find(key);
        if (it != tried.end()) {
            return it->second;
        }
        double aic = std::numeric_limits<double>::infinity();
        try {
            FitArimaOptions scoring = opts.fit;
            // common subsample so candidate AICs are directly comparable
            scoring.condition_from = std::max(opts.max_p, opts.max_q);
            ArimaModel candidate = fit_arima(train, {p, d, q}, scoring);
            // discard fits with AR or MA roots hugging the unit circle:
            // near-cancelling common factors overfit the conditioned sample
            if (min_root_modulus(candidate.ar_coeffs) > 1.01 &&
                min_root_modulus(candidate.ma_coeffs) > 1.01) {
                aic = candidate.aic;
                fits.emplace(key, std::move(candidate));
            }
        } catch (const std::exception &) {
            // infeasible or non-converged cell, skip
        }
        tried.emplace(key, aic);
        return aic;
    };

    std::pair<int, int> best{-1, -1};
    double best_aic = std::numeric_limits<double>::infinity();

    if (!opts.stepwise) {
        for (int p = 0; p <= opts.max_p; ++p) {
            for (int q = 0; q <= opts.max_q; ++q) {
                const double aic = evaluate(p, q);
                if (aic < best_aic) {
                    best_aic = aic;
                    best = {p, q};
                }
            }
        }
    } else {
        std::pair<int, int> current{std::min(2, opts.max_p), std::min(2, opts.max_q)};
        best_aic = evaluate(current.first, current.second);
        best = current;
        for (;;) {
            const std::pair<int, int> candidates[] = {
                {current.first - 1, current.second}, {current.first + 1, current.second},
                {current.first, current.second - 1}, {current.first, current.second + 1},
                {0, 0}};
            std::pair<int, int> next = current;
            double next_aic = tried.at(current);
            for (const auto &cand : candidates) {
                const double aic = evaluate(cand.first, cand.second);
                if (aic < next_aic) {
                    next_aic = aic;
                    next = cand;
                }
            }
            if (next == current) {
                break;
            }
            current = next;
            if (next_aic < best_aic) {
                best_aic = next_aic;
                best = current;
            }
        }
    }

    if (!std::isfinite(best_aic)) {
        throw EstimationError("auto_arima: every candidate order failed to fit");
    }
    // refit the winner with the standard per-order conditioning; if that
    // polish pass stalls at the iteration cap, keep the converged scoring fit
    try {
        return fit_arima(train, {best.first, d, best.second}, opts.fit);
    } catch (const ArimaEstimationError &) {
        return std::move(fits.at(best));
    }
}

TimeSeries arima_forecast(const ArimaModel &model, int h) {
    if (h < 1) {
        throw std::invalid_argument("forecast horizon must be positive");
    }
    if (model.degenerate_constant) {
        TimeSeries flat;
        flat.values.assign(static_cast<std::size_t>(h), model.intercept);
        flat.frequency = model.residuals.frequency;
        flat.seasonal_period = model.residuals.seasonal_period;
        flat.origin_index =
            model.residuals.origin_index + static_cast<long>(model.residuals.size());
        return flat;
    }
    const int p = model.order.p;
    const int q = model.order.q;

    // ARMA recursion on the differenced scale with future innovations zero.
    std::vector<double> w_hist = model.diff_tail;
    std::vector<double> eps_hist = model.innovation_tail;
    std::vector<double> w_fore;
    w_fore.reserve(static_cast<std::size_t>(h));
    for (int j = 0; j < h; ++j) {
        double pred = model.intercept;
        for (int i = 1; i <= p; ++i) {
            const long idx = static_cast<long>(w_hist.size()) - i;
            if (idx >= 0) {
                pred += model.ar_coeffs[static_cast<std::size_t>(i - 1)] *
                        w_hist[static_cast<std::size_t>(idx)];
            }
        }
        for (int jj = 1; jj <= q; ++jj) {
            const long idx = static_cast<long>(eps_hist.size()) - jj;
            if (idx >= 0) {
                pred -= model.ma_coeffs[static_cast<std::size_t>(jj - 1)] *
                        eps_hist[static_cast<std::size_t>(idx)];
            }
        }
        w_fore.push_back(pred);
        w_hist.push_back(pred);
        eps_hist.push_back(0.0);
    }

    // Undo the differencing by cumulative summation, innermost stage first.
    std::vector<double> level = std::move(w_fore);
    for (int k = model.order.d - 1; k >= 0; --k) {
        double acc = model.integration_tail[static_cast<std::size_t>(k)];
        for (double &v : level) {
            acc += v;
            v = acc;
        }
    }

    TimeSeries out;
    out.values = std::move(level);
    out.frequency = model.residuals.frequency;
    out.seasonal_period = model.residuals.seasonal_period;
    out.origin_index =
        model.residuals.origin_index + static_cast<long>(model.residuals.size());
    return out;
}

double arima_css(const ArimaModel &model, const TimeSeries &train) {
    std::vector<double> w = train.values;
    for (int k = 0; k < model.order.d; ++k) {
        w = difference_once(w);
    }
    return css_innovations(w, model.order.p, model.order.q, model.intercept,
                           model.ar_coeffs.data(), model.ma_coeffs.data())
        .css;
}

} // namespace parnn
