#include "parnn/errors.hpp"
#include "parnn/metrics.hpp"
#include "parnn/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace parnn;

namespace {

// Independent brute-force oracles, written from the formulas alone.
double oracle_mase(const std::vector<double> &train, const std::vector<double> &actual,
                   const std::vector<double> &predicted, int s) {
    double num = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        num += std::fabs(actual[i] - predicted[i]);
    }
    double denom = 0.0;
    for (std::size_t i = static_cast<std::size_t>(s); i < train.size(); ++i) {
        denom += std::fabs(train[i] - train[i - static_cast<std::size_t>(s)]);
    }
    const double big_m = static_cast<double>(train.size());
    const double n = static_cast<double>(actual.size());
    return num / ((n / (big_m - s)) * denom);
}

double oracle_rmse(const std::vector<double> &actual, const std::vector<double> &predicted) {
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        acc += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    }
    return std::sqrt(acc / static_cast<double>(actual.size()));
}

double oracle_smape(const std::vector<double> &actual, const std::vector<double> &predicted) {
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        acc += std::fabs(actual[i] - predicted[i]) /
               ((std::fabs(actual[i]) + std::fabs(predicted[i])) / 2.0);
    }
    return acc * 100.0 / static_cast<double>(actual.size());
}

EvalContext make_ctx(std::vector<double> train, std::vector<double> actual,
                     std::vector<double> predicted, int s = 1) {
    EvalContext ctx;
    ctx.train.values = std::move(train);
    ctx.actual = std::move(actual);
    ctx.predicted = std::move(predicted);
    ctx.seasonal_period = s;
    return ctx;
}

} // namespace

TEST_CASE("mase worked examples") {
    CHECK(mase(make_ctx({1, 2, 3, 4}, {5}, {4})) == doctest::Approx(1.0));
    CHECK(mase(make_ctx({1, 2, 3, 4}, {5, 6}, {5, 6})) == 0.0);
    CHECK_THROWS_AS(mase(make_ctx({2, 2, 2, 2}, {5}, {4})), MetricError);
}

TEST_CASE("rmse worked examples") {
    CHECK(rmse({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(rmse({0, 0}, {3, 4}) == doctest::Approx(std::sqrt(12.5)));
    CHECK(rmse({10}, {7}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(rmse({1, 2}, {1}), ShapeError);
}

TEST_CASE("smape worked examples") {
    CHECK(smape({5, 5}, {5, 5}) == 0.0);
    CHECK(smape({100}, {0}) == doctest::Approx(200.0));
    CHECK(smape({2}, {1}) == doctest::Approx(100.0 / 1.5));
    CHECK_THROWS_AS(smape({0}, {0}), MetricError);
}

TEST_CASE("metrics match the brute-force oracles to 1e-12 on 1000 random cases") {
    Rng rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 8 + static_cast<int>(rng.uniform() * 40);
        const int n = 1 + static_cast<int>(rng.uniform() * 12);
        const int s = 1 + static_cast<int>(rng.uniform() * 3);
        std::vector<double> train(static_cast<std::size_t>(m));
        for (double &x : train) {
            x = rng.normal(10.0, 4.0);
        }
        std::vector<double> actual(static_cast<std::size_t>(n));
        std::vector<double> predicted(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            actual[static_cast<std::size_t>(i)] = rng.normal(10.0, 4.0);
            predicted[static_cast<std::size_t>(i)] = rng.normal(10.0, 4.0);
        }
        const EvalContext ctx = make_ctx(train, actual, predicted, s);
        CHECK(mase(ctx) ==
              doctest::Approx(oracle_mase(train, actual, predicted, s)).epsilon(1e-12));
        CHECK(rmse(actual, predicted) ==
              doctest::Approx(oracle_rmse(actual, predicted)).epsilon(1e-12));
        CHECK(smape(actual, predicted) ==
              doctest::Approx(oracle_smape(actual, predicted)).epsilon(1e-12));
    }
}

TEST_CASE("mase is invariant under common positive rescaling") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> train(20), actual(5), predicted(5);
        for (double &x : train) x = rng.normal(5.0, 2.0);
        for (double &x : actual) x = rng.normal(5.0, 2.0);
        for (double &x : predicted) x = rng.normal(5.0, 2.0);
        const double base = mase(make_ctx(train, actual, predicted));

        const double c = 0.1 + 10.0 * rng.uniform();
        auto scaled = [&](std::vector<double> v) {
            for (double &x : v) x *= c;
            return v;
        };
        const double rescaled =
            mase(make_ctx(scaled(train), scaled(actual), scaled(predicted)));
        CHECK(rescaled == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("smape stays within [0, 200] and rmse dominates the mean absolute error") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * 20);
        std::vector<double> a(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n));
        double mae = 0.0;
        for (int i = 0; i < n; ++i) {
            a[static_cast<std::size_t>(i)] = rng.normal(0.0, 10.0);
            p[static_cast<std::size_t>(i)] = rng.normal(0.0, 10.0);
            mae += std::fabs(a[static_cast<std::size_t>(i)] - p[static_cast<std::size_t>(i)]);
        }
        mae /= n;
        const double s = smape(a, p);
        CHECK(s >= 0.0);
        CHECK(s <= 200.0 + 1e-12);
        CHECK(rmse(a, p) >= mae - 1e-12);
    }
}
