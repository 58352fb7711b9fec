#pragma once

#include <functional>
#include <vector>

namespace parnn {

struct SimplexOptions {
    int max_iterations = 0;    // 0 = 500 * dimension
    double tolerance = 1e-8;   // relative spread of simplex objective values
    double initial_step = 0.1; // per-coordinate displacement of the start simplex
    int restarts = 1;          // re-seed the simplex at the optimum this many times
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead descent. The initial point is always a
/// vertex of the start simplex, so the returned value never exceeds
/// f(start).
SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                          std::vector<double> start, const SimplexOptions &opts = {});

} // namespace parnn
