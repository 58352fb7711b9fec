#include "parnn/intervals.hpp"

#include "parnn/errors.hpp"
#include "parnn/parallel.hpp"
#include "parnn/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace parnn {

PathMatrix simulate_paths(const ParnnModel &model, int h, const SimulationConfig &cfg) {
    if (h < 1) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (cfg.n_paths < 2) {
        throw std::invalid_argument("n_paths must be >= 2");
    }

    PathMatrix out;
    out.values.resize(cfg.n_paths, h);
    std::vector<char> clamped(static_cast<std::size_t>(cfg.n_paths), 0);

    // The lowest representable value on the transformed scale, nudged inward.
    const double z_floor = boxcox_inverse_lower_bound(model.boxcox) + 1e-9;
    const double y_floor = -model.boxcox.shift + 1e-9;

    parallel_for(
        static_cast<std::size_t>(cfg.n_paths),
        [&](std::size_t path) {
            Rng rng(cfg.seed + static_cast<std::uint64_t>(path));
            std::vector<double> y_hist = model.y_tail;
            std::vector<double> e_hist = model.e_tail;
            for (int step = 0; step < h; ++step) {
                double point = model.one_step(y_hist, e_hist);
                if (point < y_floor) {
                    point = y_floor;
                    clamped[path] = 1;
                }
                double z = boxcox_transform_value(point, model.boxcox) +
                           rng.normal(0.0, model.residual_sigma);
                if (z < z_floor) {
                    z = z_floor;
                    clamped[path] = 1;
                }
                const double noisy = boxcox_inverse_value(z, model.boxcox);
                out.values(static_cast<long>(path), step) = noisy;
                y_hist.push_back(noisy);
                e_hist.push_back(0.0);
            }
        },
        cfg.threads);

    for (char c : clamped) {
        out.clamped_paths += c;
    }
    return out;
}

double quantile_type7(std::vector<double> sample, double prob) {
    if (sample.empty()) {
        throw SizingError("quantile of an empty sample");
    }
    if (prob < 0.0 || prob > 1.0) {
        throw std::invalid_argument("quantile probability must lie in [0, 1]");
    }
    std::sort(sample.begin(), sample.end());
    const double pos = prob * static_cast<double>(sample.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sample.size()) {
        return sample.back();
    }
    return sample[lo] + frac * (sample[lo + 1] - sample[lo]);
}

IntervalForecast percentile_interval(const PathMatrix &paths, double level) {
    if (paths.values.rows() < 2) {
        throw std::invalid_argument("need at least two simulated paths");
    }
    if (level <= 0.0 || level >= 1.0) {
        throw std::invalid_argument("level must lie in (0, 1)");
    }
    IntervalForecast fc;
    fc.horizon = static_cast<int>(paths.values.cols());
    fc.level = level;
    fc.clamped_paths = paths.clamped_paths;
    fc.lower.resize(static_cast<std::size_t>(fc.horizon));
    fc.upper.resize(static_cast<std::size_t>(fc.horizon));
    const double lo_p = (1.0 - level) / 2.0;
    const double hi_p = (1.0 + level) / 2.0;
    std::vector<double> column(static_cast<std::size_t>(paths.values.rows()));
    for (int s = 0; s < fc.horizon; ++s) {
        for (long r = 0; r < paths.values.rows(); ++r) {
            column[static_cast<std::size_t>(r)] = paths.values(r, s);
        }
        fc.lower[static_cast<std::size_t>(s)] = quantile_type7(column, lo_p);
        fc.upper[static_cast<std::size_t>(s)] = quantile_type7(column, hi_p);
    }
    return fc;
}

IntervalForecast interval_forecast(const ParnnModel &model, int h,
                                   const SimulationConfig &cfg) {
    const PathMatrix paths = simulate_paths(model, h, cfg);
    IntervalForecast fc = percentile_interval(paths, cfg.level);
    fc.point = forecast_recursive(model, h).values;
    return fc;
}

} // namespace parnn
