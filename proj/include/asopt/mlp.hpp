#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

namespace asopt {

// Raised when a loss or activation becomes non-finite during training.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerically stable logistic function.
inline double sigmoid(double x)
{
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct MlpShape {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;

    // H*M + H + N*H + N
    std::size_t parameter_count() const { return hidden * inputs + hidden + outputs * hidden + outputs; }

    bool operator==(const MlpShape&) const = default;
};

// Hidden width from the empirical rule round(sqrt(M + N)) + alpha.
std::size_t hidden_size_rule(std::size_t inputs, std::size_t outputs, int alpha);

// One hidden layer, sigmoid hidden units, identity outputs:
//   y = W2 * sigmoid(W1 * x + b1) + b2
struct MlpNetwork {
    Eigen::MatrixXd w1; // H x M
    Eigen::VectorXd b1; // H
    Eigen::MatrixXd w2; // N x H
    Eigen::VectorXd b2; // N

    MlpShape shape() const
    {
        return {static_cast<std::size_t>(w1.cols()), static_cast<std::size_t>(w1.rows()),
                static_cast<std::size_t>(w2.rows())};
    }

    bool all_finite() const;

    // {"sizes": [M, H, N], "W1": row-major, "b1", "W2": row-major, "b2"}
    nlohmann::json to_json() const;
    static MlpNetwork from_json(const nlohmann::json& j);

    bool operator==(const MlpNetwork& o) const
    {
        return shape() == o.shape() && w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2;
    }
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
MlpNetwork init_network(const MlpShape& shape, std::uint64_t seed);
MlpNetwork init_network(std::size_t inputs, std::size_t outputs, int alpha, std::uint64_t seed);

Eigen::VectorXd forward(const MlpNetwork& net, const Eigen::VectorXd& x);

// Row-wise forward pass: x is n x M, result n x N.
Eigen::MatrixXd forward_batch(const MlpNetwork& net, const Eigen::MatrixXd& x);

// Mean over all n*N entries of the squared difference.
double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);

struct Gradients {
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;
    Eigen::VectorXd b2;
    double mse = 0.0;       // data term only
    double objective = 0.0; // mse + weight_decay * (|W1|^2 + |W2|^2) / 2
};

// Exact gradient of mse + weight_decay * (|W1|^2 + |W2|^2) / 2. Biases are
// not decayed.
Gradients backprop(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   double weight_decay);

struct GdConfig {
    std::size_t num_epoch = 1500;
    double learn_rate = 1e-2;
    double weight_decay = 1e-2;
    std::uint64_t seed = 0; // initialization seed for the standard random init

    void validate() const;
};

struct TrainResult {
    MlpNetwork net;
    std::vector<double> error_curve; // training MSE before each epoch's step
};

// Full-batch gradient descent for cfg.num_epoch steps.
TrainResult train_gd(MlpNetwork net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     const GdConfig& cfg);

// Garson connection-weight importance of each input, normalized to sum to 1.
Eigen::VectorXd garson_importance(const MlpNetwork& net);

} // namespace asopt
