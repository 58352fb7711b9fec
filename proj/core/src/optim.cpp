#include "parnn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace parnn {

namespace {

double guarded(const std::function<double(const std::vector<double> &)> &f,
               const std::vector<double> &x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

SimplexResult run_once(const std::function<double(const std::vector<double> &)> &f,
                       const std::vector<double> &start, double step, int max_iter,
                       double tol) {
    const std::size_t dim = start.size();
    const std::size_t m = dim + 1;

    std::vector<std::vector<double>> verts(m, start);
    std::vector<double> vals(m);
    for (std::size_t i = 1; i < m; ++i) {
        verts[i][i - 1] += step * std::max(1.0, std::abs(start[i - 1]));
    }
    for (std::size_t i = 0; i < m; ++i) {
        vals[i] = guarded(f, verts[i]);
    }

    SimplexResult res;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[m - 1];
        const std::size_t second_worst = order[m - 2];

        const double spread = std::abs(vals[worst] - vals[best]);
        const double scale = std::abs(vals[best]) + std::abs(vals[worst]) + 1e-300;
        if (spread / scale < tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == worst) continue;
            for (std::size_t d = 0; d < dim; ++d) {
                centroid[d] += verts[i][d];
            }
        }
        for (double &c : centroid) {
            c /= static_cast<double>(dim);
        }

        auto blend = [&](double coeff) {
            std::vector<double> x(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                x[d] = centroid[d] + coeff * (verts[worst][d] - centroid[d]);
            }
            return x;
        };

        std::vector<double> reflected = blend(-1.0);
        const double fr = guarded(f, reflected);
        if (fr < vals[best]) {
            std::vector<double> expanded = blend(-2.0);
            const double fe = guarded(f, expanded);
            if (fe < fr) {
                verts[worst] = std::move(expanded);
                vals[worst] = fe;
            } else {
                verts[worst] = std::move(reflected);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second_worst]) {
            verts[worst] = std::move(reflected);
            vals[worst] = fr;
            continue;
        }
        std::vector<double> contracted = blend(fr < vals[worst] ? -0.5 : 0.5);
        const double fc = guarded(f, contracted);
        if (fc < std::min(fr, vals[worst])) {
            verts[worst] = std::move(contracted);
            vals[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i < m; ++i) {
            if (i == best) continue;
            for (std::size_t d = 0; d < dim; ++d) {
                verts[i][d] = verts[best][d] + 0.5 * (verts[i][d] - verts[best][d]);
            }
            vals[i] = guarded(f, verts[i]);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < m; ++i) {
        if (vals[i] < vals[best]) best = i;
    }
    res.x = verts[best];
    res.value = vals[best];
    res.iterations = iter;
    return res;
}

} // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                          std::vector<double> start, const SimplexOptions &opts) {
    if (start.empty()) {
        SimplexResult res;
        res.value = guarded(f, start);
        res.converged = true;
        return res;
    }
    const int max_iter =
        opts.max_iterations > 0 ? opts.max_iterations : 500 * static_cast<int>(start.size());

    SimplexResult best = run_once(f, start, opts.initial_step, max_iter, opts.tolerance);
    int total_iter = best.iterations;
    for (int r = 0; r < opts.restarts; ++r) {
        SimplexResult next =
            run_once(f, best.x, opts.initial_step * 0.1, max_iter, opts.tolerance);
        total_iter += next.iterations;
        if (next.value <= best.value) {
            best = std::move(next);
        }
    }
    best.iterations = total_iter;
    return best;
}

} // namespace parnn
