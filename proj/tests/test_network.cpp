#include "parnn/errors.hpp"
#include "parnn/network.hpp"
#include "parnn/rng.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace parnn;

namespace {

// Flatten/unflatten helpers so the finite-difference loop can walk every weight.
std::vector<double *> weight_pointers(NetworkWeights &net) {
    std::vector<double *> ptrs;
    for (long j = 0; j < net.input_to_hidden.cols(); ++j) {
        for (long i = 0; i < net.input_to_hidden.rows(); ++i) {
            ptrs.push_back(&net.input_to_hidden(i, j));
        }
    }
    for (long j = 0; j < net.hidden_bias.size(); ++j) {
        ptrs.push_back(&net.hidden_bias(j));
    }
    for (long j = 0; j < net.hidden_to_output.size(); ++j) {
        ptrs.push_back(&net.hidden_to_output(j));
    }
    ptrs.push_back(&net.output_bias);
    return ptrs;
}

std::vector<double> gradient_values(const NetworkGradients &g) {
    std::vector<double> out;
    for (long j = 0; j < g.input_to_hidden.cols(); ++j) {
        for (long i = 0; i < g.input_to_hidden.rows(); ++i) {
            out.push_back(g.input_to_hidden(i, j));
        }
    }
    for (long j = 0; j < g.hidden_bias.size(); ++j) {
        out.push_back(g.hidden_bias(j));
    }
    for (long j = 0; j < g.hidden_to_output.size(); ++j) {
        out.push_back(g.hidden_to_output(j));
    }
    out.push_back(g.output_bias);
    return out;
}

/// Max relative error between the analytic gradient and central finite
/// differences with step 1e-5.
double gradient_check(int n_inputs, int k, int rows, std::uint64_t seed) {
    NetworkWeights net = init_network(n_inputs, k, seed, 0.5);
    Rng rng(seed + 1);
    Eigen::MatrixXd X(rows, n_inputs);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < n_inputs; ++c) {
            X(r, c) = rng.normal();
        }
        y(r) = rng.normal();
    }

    const std::vector<double> analytic = gradient_values(mse_gradient(net, X, y));
    const std::vector<double *> ptrs = weight_pointers(net);
    REQUIRE(analytic.size() == ptrs.size());

    const double step = 1e-5;
    double worst = 0.0;
    for (std::size_t w = 0; w < ptrs.size(); ++w) {
        const double saved = *ptrs[w];
        *ptrs[w] = saved + step;
        const double up = mse_loss(net, X, y);
        *ptrs[w] = saved - step;
        const double down = mse_loss(net, X, y);
        *ptrs[w] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double scale = std::max({std::fabs(numeric), std::fabs(analytic[w]), 1e-8});
        worst = std::max(worst, std::fabs(numeric - analytic[w]) / scale);
    }
    return worst;
}

} // namespace

TEST_CASE("weight counting") {
    CHECK(count_weights(6, 4) == 33);
    CHECK(count_weights(1, 1) == 4);
    CHECK(count_weights(4, 2) == 13);
    CHECK_THROWS_AS(count_weights(0, 2), std::invalid_argument);
}

TEST_CASE("initialization is seed-deterministic") {
    const NetworkWeights a = init_network(3, 2, 99, 0.5);
    const NetworkWeights b = init_network(3, 2, 99, 0.5);
    CHECK(test_util::same_network(a, b));

    const NetworkWeights c = init_network(3, 2, 100, 0.5);
    CHECK_FALSE(test_util::bitwise_equal(a.input_to_hidden, c.input_to_hidden));

    const NetworkWeights z = init_network(3, 2, 7, 0.0);
    CHECK(z.input_to_hidden.cwiseAbs().maxCoeff() == 0.0);
    CHECK(z.output_bias == 0.0);

    for (long j = 0; j < a.input_to_hidden.size(); ++j) {
        CHECK(std::fabs(a.input_to_hidden(j)) < 0.5);
    }
}

TEST_CASE("forward pass closed forms") {
    NetworkWeights zero = init_network(2, 3, 0, 0.0);
    Eigen::VectorXd x(2);
    x << 1.0, -2.0;
    CHECK(forward(zero, x) == 0.0);

    zero.output_bias = 3.25;
    CHECK(forward(zero, x) == doctest::Approx(3.25));

    // 1-input, 1-hidden net with unit weights: 2 * G(0) = 1 at x = 0
    NetworkWeights tiny = init_network(1, 1, 0, 0.0);
    tiny.hidden_to_output(0) = 2.0;
    tiny.input_to_hidden(0, 0) = 1.0;
    Eigen::VectorXd origin(1);
    origin << 0.0;
    CHECK(forward(tiny, origin) == doctest::Approx(1.0));

    Eigen::VectorXd wrong(3);
    wrong << 1, 2, 3;
    CHECK_THROWS_AS(forward(tiny, wrong), ShapeError);
}

TEST_CASE("forward is bounded by the output weights") {
    Rng rng(4);
    const NetworkWeights net = init_network(4, 3, 17, 0.5);
    double bound = std::fabs(net.output_bias);
    for (long j = 0; j < net.hidden_to_output.size(); ++j) {
        bound += std::fabs(net.hidden_to_output(j));
    }
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) {
            x(i) = rng.normal(0.0, 1000.0); // extreme inputs
        }
        CHECK(std::fabs(forward(net, x)) <= bound + 1e-12);
    }
}

TEST_CASE("analytic gradient matches central finite differences") {
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        worst = std::max(worst, gradient_check(3, 2, 12, 1000 + trial));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("training at a global minimum is a fixed point") {
    const NetworkWeights teacher = init_network(2, 2, 5, 0.5);
    Rng rng(6);
    Eigen::MatrixXd X(30, 2);
    for (long i = 0; i < X.size(); ++i) {
        X(i) = rng.normal();
    }
    const Eigen::VectorXd y = forward_batch(teacher, X);

    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.learning_rate = 0.1;
    const NetworkWeights trained = backprop_train(teacher, X, y, cfg);
    CHECK((trained.input_to_hidden - teacher.input_to_hidden).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(std::fabs(trained.output_bias - teacher.output_bias) < 1e-12);
}

TEST_CASE("gradient descent reaches the least-squares noise floor on a linear task") {
    Rng rng(12);
    const int n = 160;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = rng.normal();
        y(i) = 0.9 * X(i, 0);
    }
    // oracle: OLS on the same data bounds the achievable in-sample MSE
    const double ols_mse =
        (y - X * (X.colPivHouseholderQr().solve(y))).squaredNorm() / n;
    const double var_y = (y.array() - y.mean()).square().sum() / n;

    TrainConfig cfg;
    cfg.epochs = 2000;
    cfg.learning_rate = 0.1;
    cfg.seed = 3;
    const NetworkWeights net =
        backprop_train(init_network(1, 1, 3, 0.5), X, y, cfg);
    const double mse = mse_loss(net, X, y);
    CHECK(mse < 0.01 * var_y + ols_mse);
}

TEST_CASE("training is deterministic and never ends above the initial loss") {
    Rng rng(21);
    Eigen::MatrixXd X(40, 3);
    Eigen::VectorXd y(40);
    for (long i = 0; i < X.size(); ++i) X(i) = rng.normal();
    for (long i = 0; i < y.size(); ++i) y(i) = rng.normal();

    TrainConfig cfg;
    cfg.epochs = 300;
    cfg.learning_rate = 0.05;
    const NetworkWeights start = init_network(3, 2, 9, 0.5);
    const NetworkWeights a = backprop_train(start, X, y, cfg);
    const NetworkWeights b = backprop_train(start, X, y, cfg);
    CHECK(test_util::same_network(a, b));
    CHECK(mse_loss(a, X, y) <= mse_loss(start, X, y));
}

TEST_CASE("loss is monotone non-increasing for a small enough step") {
    Rng rng(31);
    Eigen::MatrixXd X(25, 2);
    Eigen::VectorXd y(25);
    for (long i = 0; i < X.size(); ++i) X(i) = rng.normal();
    for (long i = 0; i < y.size(); ++i) y(i) = rng.normal();

    NetworkWeights net = init_network(2, 2, 123, 0.5);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.learning_rate = 0.01;
    double prev = mse_loss(net, X, y);
    for (int epoch = 0; epoch < 200; ++epoch) {
        net = backprop_train(net, X, y, cfg);
        const double cur = mse_loss(net, X, y);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("divergence raises an error naming the epoch") {
    // a huge target with an aggressive step makes the loss overflow
    Eigen::MatrixXd X(4, 1);
    X << 1e150, -1e150, 1e150, -1e150;
    Eigen::VectorXd y(4);
    y << 1e150, -1e150, 1e150, -1e150;
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.learning_rate = 0.9999;
    bool threw = false;
    try {
        backprop_train(init_network(1, 1, 2, 0.5), X, y, cfg);
    } catch (const DivergenceError &e) {
        threw = true;
        CHECK(e.epoch() >= 0);
    }
    CHECK(threw);
}
