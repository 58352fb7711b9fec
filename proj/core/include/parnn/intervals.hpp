#pragma once

#include "parnn/parnn.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace parnn {

struct SimulationConfig {
    int n_paths = 1000;
    double level = 0.80;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct PathMatrix {
    Eigen::MatrixXd values; // n_paths x h, original scale
    int clamped_paths = 0;  // paths that hit the Box-Cox domain boundary
};

/// Simulates future sample paths: every step adds an independent
/// Gaussian(0, residual_sigma^2) draw to the one-step forecast on the
/// Box-Cox(0.5) scale and feeds the noisy value back as history.
/// Draws outside the inverse-transform domain are clamped at the boundary
/// and the affected path count is recorded. Deterministic given the seed.
PathMatrix simulate_paths(const ParnnModel &model, int h, const SimulationConfig &cfg);

struct IntervalForecast {
    int horizon = 0;
    std::vector<double> point;
    std::vector<double> lower;
    std::vector<double> upper;
    double level = 0.80;
    int clamped_paths = 0;
};

/// Linear-interpolation (type-7) empirical quantile of an unsorted sample.
double quantile_type7(std::vector<double> sample, double prob);

/// Per-horizon percentile bounds at (1 -/+ level)/2 from simulated paths.
/// The point forecast is left empty; interval_forecast fills everything.
IntervalForecast percentile_interval(const PathMatrix &paths, double level);

/// Point forecast plus simulated percentile bounds.
IntervalForecast interval_forecast(const ParnnModel &model, int h,
                                   const SimulationConfig &cfg);

} // namespace parnn
