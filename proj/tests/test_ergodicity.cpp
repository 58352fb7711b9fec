#include "parnn/ergodicity.hpp"
#include "parnn/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace parnn;

namespace {

Parnn11Weights linear_only(double psi1) {
    Parnn11Weights w;
    w.psi1 = psi1;
    return w;
}

Parnn11Weights contractive(double psi1) {
    // small |beta| * |phi| keeps the total Lipschitz constant below 1
    Parnn11Weights w;
    w.psi1 = psi1;
    w.betas = {0.2};
    w.phis1 = {0.3};
    w.phis2 = {0.1};
    w.mus = {0.05};
    return w;
}

} // namespace

TEST_CASE("step worked examples") {
    const Parnn11Weights zero;
    const StatePair fixed = step(zero, 0.0, 0.0, 0.0);
    CHECK(fixed.y == 0.0);
    CHECK(fixed.e == 0.0);

    Parnn11Weights persist;
    persist.psi1 = 1.0;
    const StatePair p = step(persist, 3.25, -1.0, 0.0);
    CHECK(p.y == 3.25);
    CHECK(p.e == 0.0);

    // sigmoid saturation: the nonlinear part approaches its asymptotes
    Parnn11Weights nl;
    nl.betas = {1.0};
    nl.phis1 = {1.0};
    nl.phis2 = {0.0};
    nl.mus = {0.0};
    CHECK(step(nl, 1e9, 0.0, 0.0).y == doctest::Approx(1.0));
    CHECK(step(nl, -1e9, 0.0, 0.0).y == doctest::Approx(0.0));
}

TEST_CASE("nonlinear part is uniformly bounded by sum |beta|") {
    Parnn11Weights w;
    w.betas = {0.7, -1.3, 0.4};
    w.phis1 = {2.0, -3.0, 0.5};
    w.phis2 = {1.0, 0.2, -0.7};
    w.mus = {0.1, -0.2, 0.3};
    const double bound = w.nonlinear_bound();
    CHECK(bound == doctest::Approx(2.4));

    Rng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const double y = rng.normal(0.0, 1000.0);
        const double e = rng.normal(0.0, 1000.0);
        const double linear = w.psi1 * y + w.psi2 * e + w.nu;
        const double out = step(w, y, e, 0.0).y;
        CHECK(std::fabs(out - linear) <= bound + 1e-12);
    }
}

TEST_CASE("zero-noise linear recursion decays geometrically") {
    const StateTrajectory traj = simulate(linear_only(0.5), 40, 1, 8.0, 0.0);
    REQUIRE(traj.states.size() == 40);
    double expected = 8.0;
    for (const StatePair &s : traj.states) {
        expected *= 0.5;
        CHECK(s.y == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_FALSE(traj.exploded);
}

TEST_CASE("identical seeds give identical trajectories") {
    const Parnn11Weights w = contractive(0.6);
    const StateTrajectory a = simulate(w, 500, 33, 0.0);
    const StateTrajectory b = simulate(w, 500, 33, 0.0);
    REQUIRE(a.states.size() == b.states.size());
    for (std::size_t t = 0; t < a.states.size(); ++t) {
        CHECK(a.states[t].y == b.states[t].y);
        CHECK(a.states[t].e == b.states[t].e);
    }
}

TEST_CASE("explosive linear dynamics trip the threshold before 2000 steps") {
    const StateTrajectory traj = simulate(linear_only(1.5), 2000, 2, 1.0, 0.0);
    CHECK(traj.exploded);
    CHECK(traj.explosion_index > 0);
    CHECK(traj.explosion_index < 2000);
    // 1.5^t crosses 1e300 around t ~ 1700
    CHECK(traj.explosion_index > 1500);
}

TEST_CASE("shared-noise coupling gap for linear dynamics is exactly geometric") {
    const CouplingReport report = coupling_diagnostic(linear_only(0.5), 400, 17, 5.0, -5.0);
    CHECK(report.converged);
    REQUIRE(report.first_meeting_index.has_value());
    const double gap0 = 10.0;
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(report.gap_series[t] ==
              doctest::Approx(gap0 * std::pow(0.5, t + 1)).epsilon(1e-12));
    }
    CHECK(report.decay_rate == doctest::Approx(std::log(0.5)).epsilon(1e-9));
}

TEST_CASE("contraction-certified convergence for every seed") {
    const Parnn11Weights w = contractive(0.5);
    REQUIRE(std::fabs(w.psi1) + w.nonlinear_lipschitz() < 1.0);
    for (int seed = 0; seed < 20; ++seed) {
        const CouplingReport report = coupling_diagnostic(w, 600, seed, 10.0, 0.0);
        CHECK(report.converged);
        CHECK(report.decay_rate <= std::log(0.5) + 0.2);
    }
}

TEST_CASE("psi1 = 0 with no nonlinear part couples in one step") {
    const CouplingReport report = coupling_diagnostic(linear_only(0.0), 200, 4, 3.0, -3.0);
    CHECK(report.converged);
    CHECK(report.gap_series[0] == 0.0);
    CHECK(report.first_meeting_index.value() == 0);
}

TEST_CASE("explosive coupling never converges") {
    const CouplingReport report = coupling_diagnostic(linear_only(1.5), 2000, 5, 1.0, 0.0);
    CHECK_FALSE(report.converged);
    CHECK(report.gap_series[10] > report.gap_series[0]);
}

TEST_CASE("stationarity sweep separates the contractive and explosive regimes") {
    const SweepReport report = stationarity_sweep(contractive(0.0), {0.2, 0.5, 0.9},
                                                  1500, 5, 77);
    for (double psi1 : {0.2, 0.5, 0.9}) {
        CHECK(converged_fraction(report, psi1) == 1.0);
        CHECK(explosion_fraction(report, psi1) == 0.0);
    }

    const SweepReport boom = stationarity_sweep(linear_only(0.0), {1.5}, 2000, 3, 78);
    CHECK(explosion_fraction(boom, 1.5) == 1.0);
}

TEST_CASE("sweep at psi1 = 0 matches the one-step pushforward oracle") {
    // no y-feedback in the hidden layer: y_t = nu + beta G(phi2 e_{t-1} + mu) + eps_t
    Parnn11Weights w;
    w.nu = 0.3;
    w.betas = {0.8};
    w.phis1 = {0.0};
    w.phis2 = {0.6};
    w.mus = {-0.2};

    const long n = 40000;
    const SweepReport report = stationarity_sweep(w, {0.0}, n, 3, 5);

    // brute-force Monte Carlo of E[beta * G(phi2 eps + mu)] under eps ~ N(0,1)
    Rng rng(999);
    double acc = 0.0;
    const int mc = 400000;
    for (int i = 0; i < mc; ++i) {
        acc += 0.8 / (1.0 + std::exp(-(0.6 * rng.normal() - 0.2)));
    }
    const double oracle_mean = 0.3 + acc / mc;

    for (const SweepPoint &p : report.points) {
        // second-half mean: MA(1)-like dependence, se ~ sqrt(3 var / m)
        const double se = std::sqrt(3.0 * p.variance / static_cast<double>(n / 2));
        CHECK(std::fabs(p.mean - oracle_mean) <= 3.0 * se);
    }
}

TEST_CASE("sweep csv has the documented columns") {
    const SweepReport report = stationarity_sweep(contractive(0.0), {0.5}, 300, 2, 9);
    const std::string path =
        (std::filesystem::temp_directory_path() / "parnn_sweep_test.csv").string();
    write_sweep_csv(report, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "psi1,seed,converged,explosion,decay_rate,mean,variance");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);
    std::filesystem::remove(path);
}
