#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parnn {

/// Weights of the order-(1,k,1) state-space recursion
///   y_t = psi1 y_{t-1} + psi2 e_{t-1} + nu
///         + sum_i betas[i] G(phis1[i] y_{t-1} + phis2[i] e_{t-1} + mus[i])
///         + eps_t,
/// where e_t carries the innovation eps_t forward as the feedback state.
struct Parnn11Weights {
    double psi1 = 0.0; // shortcut on y_{t-1}
    double psi2 = 0.0; // shortcut on e_{t-1}
    double nu = 0.0;   // output bias
    std::vector<double> betas;
    std::vector<double> phis1;
    std::vector<double> phis2;
    std::vector<double> mus;

    int hidden_units() const { return static_cast<int>(betas.size()); }
    void validate() const;

    /// sum |betas|: a uniform bound on the nonlinear part's magnitude.
    double nonlinear_bound() const;
    /// sum |betas| * max(|phis1|, |phis2|) / 4: a Lipschitz bound of the
    /// nonlinear part (the sigmoid's slope is at most 1/4).
    double nonlinear_lipschitz() const;
};

/// One transition of the state (y, e) driven by innovation eps.
struct StatePair {
    double y = 0.0;
    double e = 0.0;
};

StatePair step(const Parnn11Weights &w, double y_prev, double e_prev, double eps);

struct StateTrajectory {
    std::vector<StatePair> states;
    std::uint64_t noise_seed = 0;
    Parnn11Weights weights;
    bool exploded = false;   // |y| crossed the explosion threshold
    long explosion_index = -1;
};

/// Simulates n transitions from (y0, 0) with Gaussian(0, noise_sigma^2)
/// innovations. Trajectories whose |y| exceeds 1e300 are truncated and
/// flagged. Deterministic given (w, n, seed, y0).
StateTrajectory simulate(const Parnn11Weights &w, long n, std::uint64_t seed, double y0,
                         double noise_sigma = 1.0);

struct CouplingReport {
    bool converged = false;
    std::optional<long> first_meeting_index;
    std::vector<double> gap_series; // |y_t^a - y_t^b|
    double decay_rate = 0.0;        // least-squares slope of log gap vs t
    bool exploded = false;
};

/// Runs two chains from different starts on a shared innovation stream.
/// Convergence means the gap drops below 1e-8 and stays there for at least
/// 100 steps; the decay rate is estimated on the pre-convergence window.
CouplingReport coupling_diagnostic(const Parnn11Weights &w, long n, std::uint64_t seed,
                                   double y0_a, double y0_b);

struct SweepPoint {
    double psi1 = 0.0;
    std::uint64_t seed = 0;
    bool converged = false;
    bool exploded = false;
    double decay_rate = 0.0;
    double mean = 0.0;     // sample mean of y over the second half
    double variance = 0.0; // sample variance of y over the second half
};

struct SweepReport {
    std::vector<SweepPoint> points; // grid-major, then seed order
    long steps = 0;
    int reps = 0;
};

/// Repeats the coupling diagnostic and second-half moment estimation for
/// every psi1 in the grid across `reps` seeded replications.
SweepReport stationarity_sweep(const Parnn11Weights &weights_template,
                               const std::vector<double> &psi1_grid, long n, int reps,
                               std::uint64_t seed);

/// CSV emission: psi1,seed,converged,explosion,decay_rate,mean,variance.
void write_sweep_csv(const SweepReport &report, const std::string &path);

/// Fraction helpers over one grid point of the report.
double converged_fraction(const SweepReport &report, double psi1);
double explosion_fraction(const SweepReport &report, double psi1);

} // namespace parnn
