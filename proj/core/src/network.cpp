#include "parnn/network.hpp"

#include "parnn/errors.hpp"
#include "parnn/rng.hpp"

#include <cmath>
#include <string>

namespace parnn {

long count_weights(int n_inputs, int k) {
    if (n_inputs < 1 || k < 1) {
        throw std::invalid_argument("n_inputs and k must be positive");
    }
    return static_cast<long>(n_inputs + 1) * k + (k + 1);
}

NetworkWeights init_network(int n_inputs, int k, std::uint64_t seed, double init_scale) {
    if (n_inputs < 1 || k < 1) {
        throw std::invalid_argument("n_inputs and k must be positive");
    }
    if (init_scale < 0.0) {
        throw std::invalid_argument("init_scale must be nonnegative");
    }
    Rng rng(seed);
    NetworkWeights net;
    net.input_to_hidden.resize(n_inputs, k);
    net.hidden_bias.resize(k);
    net.hidden_to_output.resize(k);
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < n_inputs; ++i) {
            net.input_to_hidden(i, j) = rng.uniform_symmetric(init_scale);
        }
    }
    for (int j = 0; j < k; ++j) {
        net.hidden_bias(j) = rng.uniform_symmetric(init_scale);
    }
    for (int j = 0; j < k; ++j) {
        net.hidden_to_output(j) = rng.uniform_symmetric(init_scale);
    }
    net.output_bias = rng.uniform_symmetric(init_scale);
    return net;
}

double sigmoid(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

namespace {

inline Eigen::MatrixXd hidden_activations(const NetworkWeights &net,
                                          const Eigen::MatrixXd &X) {
    Eigen::MatrixXd H = (X * net.input_to_hidden).rowwise() + net.hidden_bias;
    return H.unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
}

void check_input_dim(const NetworkWeights &net, long cols) {
    if (cols != net.n_inputs()) {
        throw ShapeError("network expects " + std::to_string(net.n_inputs()) +
                         " inputs, got " + std::to_string(cols));
    }
}

} // namespace

double forward(const NetworkWeights &net, const Eigen::Ref<const Eigen::VectorXd> &x) {
    check_input_dim(net, x.size());
    double out = net.output_bias;
    for (int j = 0; j < net.hidden_units(); ++j) {
        const double z = net.hidden_bias(j) + net.input_to_hidden.col(j).dot(x);
        out += net.hidden_to_output(j) * sigmoid(z);
    }
    return out;
}

Eigen::VectorXd forward_batch(const NetworkWeights &net, const Eigen::MatrixXd &X) {
    check_input_dim(net, X.cols());
    return (hidden_activations(net, X) * net.hidden_to_output).array() + net.output_bias;
}

double mse_loss(const NetworkWeights &net, const Eigen::MatrixXd &X,
                const Eigen::VectorXd &y) {
    const Eigen::VectorXd r = forward_batch(net, X) - y;
    return r.squaredNorm() / static_cast<double>(X.rows());
}

NetworkGradients mse_gradient(const NetworkWeights &net, const Eigen::MatrixXd &X,
                              const Eigen::VectorXd &y) {
    check_input_dim(net, X.cols());
    const double n = static_cast<double>(X.rows());
    const Eigen::MatrixXd H = hidden_activations(net, X);
    const Eigen::VectorXd residual =
        (H * net.hidden_to_output).array() + net.output_bias - y.array();
    const Eigen::VectorXd g = (2.0 / n) * residual;

    NetworkGradients grad;
    grad.hidden_to_output = H.transpose() * g;
    grad.output_bias = g.sum();
    const Eigen::MatrixXd dH =
        (g * net.hidden_to_output.transpose()).cwiseProduct(H).cwiseProduct(
            (1.0 - H.array()).matrix());
    grad.input_to_hidden = X.transpose() * dH;
    grad.hidden_bias = dH.colwise().sum();
    return grad;
}

NetworkWeights backprop_train(NetworkWeights net, const Eigen::MatrixXd &X,
                              const Eigen::VectorXd &y, const TrainConfig &cfg) {
    check_input_dim(net, X.cols());
    if (X.rows() != y.size()) {
        throw ShapeError("design matrix rows and target length differ");
    }
    if (X.rows() < 1) {
        throw SizingError("training requires at least one row");
    }
    if (cfg.epochs < 1) {
        throw std::invalid_argument("epochs must be >= 1");
    }
    if (cfg.learning_rate <= 0.0 || cfg.learning_rate >= 1.0) {
        throw std::invalid_argument("learning_rate must lie in (0, 1)");
    }

    const double n = static_cast<double>(X.rows());
    const double lr = cfg.learning_rate;
    Eigen::MatrixXd H, dH;
    Eigen::VectorXd residual, g;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        H = hidden_activations(net, X);
        residual = (H * net.hidden_to_output).array() + net.output_bias - y.array();
        const double loss = residual.squaredNorm() / n;
        if (!std::isfinite(loss)) {
            throw DivergenceError("training loss became non-finite at epoch " +
                                      std::to_string(epoch),
                                  epoch);
        }
        g = (2.0 / n) * residual;
        dH = (g * net.hidden_to_output.transpose()).cwiseProduct(H).cwiseProduct(
            (1.0 - H.array()).matrix());

        net.hidden_to_output.noalias() -= lr * (H.transpose() * g);
        net.output_bias -= lr * g.sum();
        net.input_to_hidden.noalias() -= lr * (X.transpose() * dH);
        net.hidden_bias -= lr * dH.colwise().sum();
    }
    return net;
}

} // namespace parnn
