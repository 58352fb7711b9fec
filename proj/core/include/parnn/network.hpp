#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace parnn {

/// Single-hidden-layer feed-forward regression network
///   f(x) = output_bias + sum_j hidden_to_output[j] * G(hidden_bias[j] + W.col(j) . x)
/// with G the logistic sigmoid.
struct NetworkWeights {
    Eigen::MatrixXd input_to_hidden;  // n_inputs x k
    Eigen::RowVectorXd hidden_bias;   // 1 x k
    Eigen::VectorXd hidden_to_output; // k
    double output_bias = 0.0;

    int n_inputs() const { return static_cast<int>(input_to_hidden.rows()); }
    int hidden_units() const { return static_cast<int>(input_to_hidden.cols()); }
};

struct TrainConfig {
    int epochs = 1500;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
    double init_scale = 0.5;
};

/// (n_inputs + 1) * k + (k + 1): input-to-hidden weights and biases plus
/// hidden-to-output weights and the output bias.
long count_weights(int n_inputs, int k);

/// Weights drawn i.i.d. uniform on (-init_scale, +init_scale) in a fixed
/// order from a generator seeded with `seed`; identical seeds give
/// bit-identical networks.
NetworkWeights init_network(int n_inputs, int k, std::uint64_t seed, double init_scale);

double sigmoid(double z);

double forward(const NetworkWeights &net, const Eigen::Ref<const Eigen::VectorXd> &x);

/// One forward pass per row of X.
Eigen::VectorXd forward_batch(const NetworkWeights &net, const Eigen::MatrixXd &X);

double mse_loss(const NetworkWeights &net, const Eigen::MatrixXd &X,
                const Eigen::VectorXd &y);

struct NetworkGradients {
    Eigen::MatrixXd input_to_hidden;
    Eigen::RowVectorXd hidden_bias;
    Eigen::VectorXd hidden_to_output;
    double output_bias = 0.0;
};

/// Analytic gradient of the mean squared error.
NetworkGradients mse_gradient(const NetworkWeights &net, const Eigen::MatrixXd &X,
                              const Eigen::VectorXd &y);

/// Full-batch gradient descent on the mean squared error for cfg.epochs
/// steps. Throws DivergenceError naming the epoch if the loss becomes
/// non-finite.
NetworkWeights backprop_train(NetworkWeights net, const Eigen::MatrixXd &X,
                              const Eigen::VectorXd &y, const TrainConfig &cfg);

} // namespace parnn
