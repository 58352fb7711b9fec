#include "parnn/ergodicity.hpp"

#include "parnn/errors.hpp"
#include "parnn/network.hpp"
#include "parnn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace parnn {

namespace {
constexpr double kExplosionThreshold = 1e300;
constexpr double kCouplingTolerance = 1e-8;
constexpr long kCouplingHold = 100;
} // namespace

void Parnn11Weights::validate() const {
    const std::size_t k = betas.size();
    if (phis1.size() != k || phis2.size() != k || mus.size() != k) {
        throw ShapeError("hidden-unit weight vectors must share one length");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(psi1) || !finite(psi2) || !finite(nu)) {
        throw std::invalid_argument("weights must be finite");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!finite(betas[i]) || !finite(phis1[i]) || !finite(phis2[i]) || !finite(mus[i])) {
            throw std::invalid_argument("weights must be finite");
        }
    }
}

double Parnn11Weights::nonlinear_bound() const {
    double sum = 0.0;
    for (double b : betas) {
        sum += std::abs(b);
    }
    return sum;
}

double Parnn11Weights::nonlinear_lipschitz() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        sum += std::abs(betas[i]) * std::max(std::abs(phis1[i]), std::abs(phis2[i]));
    }
    return 0.25 * sum;
}

StatePair step(const Parnn11Weights &w, double y_prev, double e_prev, double eps) {
    double y = w.psi1 * y_prev + w.psi2 * e_prev + w.nu;
    for (std::size_t i = 0; i < w.betas.size(); ++i) {
        y += w.betas[i] * sigmoid(w.phis1[i] * y_prev + w.phis2[i] * e_prev + w.mus[i]);
    }
    y += eps;
    return {y, eps};
}

StateTrajectory simulate(const Parnn11Weights &w, long n, std::uint64_t seed, double y0,
                         double noise_sigma) {
    if (n < 1) {
        throw std::invalid_argument("trajectory length must be positive");
    }
    w.validate();
    StateTrajectory traj;
    traj.noise_seed = seed;
    traj.weights = w;
    traj.states.reserve(static_cast<std::size_t>(n));

    Rng rng(seed);
    double y = y0;
    double e = 0.0;
    for (long t = 0; t < n; ++t) {
        const double eps = noise_sigma == 0.0 ? 0.0 : rng.normal(0.0, noise_sigma);
        const StatePair next = step(w, y, e, eps);
        y = next.y;
        e = next.e;
        traj.states.push_back(next);
        if (std::abs(y) > kExplosionThreshold || !std::isfinite(y)) {
            traj.exploded = true;
            traj.explosion_index = t;
            break;
        }
    }
    return traj;
}

CouplingReport coupling_diagnostic(const Parnn11Weights &w, long n, std::uint64_t seed,
                                   double y0_a, double y0_b) {
    if (y0_a == y0_b) {
        throw std::invalid_argument("coupling requires distinct initial states");
    }
    w.validate();
    CouplingReport report;
    report.gap_series.reserve(static_cast<std::size_t>(n));

    Rng rng(seed);
    double ya = y0_a, ea = 0.0;
    double yb = y0_b, eb = 0.0;
    long below_since = -1;
    for (long t = 0; t < n; ++t) {
        const double eps = rng.normal();
        const StatePair na = step(w, ya, ea, eps);
        const StatePair nb = step(w, yb, eb, eps);
        ya = na.y;
        ea = na.e;
        yb = nb.y;
        eb = nb.e;
        const double gap = std::abs(ya - yb);
        report.gap_series.push_back(gap);
        if (!std::isfinite(ya) || !std::isfinite(yb) ||
            std::abs(ya) > kExplosionThreshold || std::abs(yb) > kExplosionThreshold) {
            report.exploded = true;
            break;
        }
        if (gap < kCouplingTolerance) {
            if (below_since < 0) {
                below_since = t;
            }
            if (!report.converged && t - below_since + 1 >= kCouplingHold) {
                report.converged = true;
                report.first_meeting_index = below_since;
            }
        } else {
            below_since = -1;
        }
    }
    const long steps = static_cast<long>(report.gap_series.size());

    // Least-squares slope of log(gap) over the pre-convergence window.
    const long window_end = report.first_meeting_index.value_or(steps);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long m = 0;
    for (long t = 0; t < window_end; ++t) {
        const double gap = report.gap_series[static_cast<std::size_t>(t)];
        if (gap <= 0.0 || !std::isfinite(gap)) {
            continue;
        }
        const double x = static_cast<double>(t);
        const double yv = std::log(gap);
        sx += x;
        sy += yv;
        sxx += x * x;
        sxy += x * yv;
        ++m;
    }
    if (m >= 2) {
        const double denom = static_cast<double>(m) * sxx - sx * sx;
        if (denom != 0.0) {
            report.decay_rate = (static_cast<double>(m) * sxy - sx * sy) / denom;
        }
    }
    return report;
}

SweepReport stationarity_sweep(const Parnn11Weights &weights_template,
                               const std::vector<double> &psi1_grid, long n, int reps,
                               std::uint64_t seed) {
    if (psi1_grid.empty()) {
        throw std::invalid_argument("psi1 grid must be nonempty");
    }
    if (reps < 1) {
        throw std::invalid_argument("reps must be >= 1");
    }
    SweepReport report;
    report.steps = n;
    report.reps = reps;
    report.points.reserve(psi1_grid.size() * static_cast<std::size_t>(reps));

    for (std::size_t g = 0; g < psi1_grid.size(); ++g) {
        Parnn11Weights w = weights_template;
        w.psi1 = psi1_grid[g];
        for (int r = 0; r < reps; ++r) {
            SweepPoint point;
            point.psi1 = w.psi1;
            point.seed = seed + static_cast<std::uint64_t>(g) * 1000003ULL +
                         static_cast<std::uint64_t>(r);

            const CouplingReport coupling =
                coupling_diagnostic(w, n, point.seed, 1.0, -1.0);
            point.converged = coupling.converged;
            point.decay_rate = coupling.decay_rate;

            const StateTrajectory traj = simulate(w, n, point.seed, 0.0);
            point.exploded = traj.exploded || coupling.exploded;
            if (!traj.exploded) {
                const std::size_t half = traj.states.size() / 2;
                double sum = 0.0, sq = 0.0;
                const std::size_t count = traj.states.size() - half;
                for (std::size_t t = half; t < traj.states.size(); ++t) {
                    sum += traj.states[t].y;
                }
                point.mean = sum / static_cast<double>(count);
                for (std::size_t t = half; t < traj.states.size(); ++t) {
                    const double d = traj.states[t].y - point.mean;
                    sq += d * d;
                }
                point.variance =
                    count > 1 ? sq / static_cast<double>(count - 1) : 0.0;
            }
            report.points.push_back(point);
        }
    }
    return report;
}

void write_sweep_csv(const SweepReport &report, const std::string &path) {
    std::FILE *out = std::fopen(path.c_str(), "w");
    if (!out) {
        throw DataError("cannot open '" + path + "' for writing");
    }
    std::fputs("psi1,seed,converged,explosion,decay_rate,mean,variance\n", out);
    for (const SweepPoint &p : report.points) {
        std::fprintf(out, "%.10g,%llu,%d,%d,%.10g,%.10g,%.10g\n", p.psi1,
                     static_cast<unsigned long long>(p.seed), p.converged ? 1 : 0,
                     p.exploded ? 1 : 0, p.decay_rate, p.mean, p.variance);
    }
    std::fclose(out);
}

double converged_fraction(const SweepReport &report, double psi1) {
    long total = 0, hits = 0;
    for (const SweepPoint &p : report.points) {
        if (p.psi1 == psi1) {
            ++total;
            hits += p.converged ? 1 : 0;
        }
    }
    return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

double explosion_fraction(const SweepReport &report, double psi1) {
    long total = 0, hits = 0;
    for (const SweepPoint &p : report.points) {
        if (p.psi1 == psi1) {
            ++total;
            hits += p.exploded ? 1 : 0;
        }
    }
    return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

} // namespace parnn
