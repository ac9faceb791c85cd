#pragma once

#include <vector>

#include <Eigen/Core>

#include "asopt/rng.hpp"

namespace asopt {

enum class Activation { sigmoid, identity };

struct DenseLayer {
    Eigen::MatrixXd w; // out x in
    Eigen::VectorXd b; // out
    Activation act = Activation::sigmoid;
};

// Stack of dense layers evaluated row-wise on a batch (rows = samples).
// Backward passes return the gradient with respect to the stack input so that
// stacks can be chained (e.g. embedder -> recovery).
class LayerStack {
public:
    LayerStack() = default;

    // widths = {in, h1, ..., out}; acts has widths.size() - 1 entries.
    // Glorot-uniform weights, biases zero. Sigmoid layers widen the range by
    // sigmoid_gain.
    LayerStack(const std::vector<std::size_t>& widths, const std::vector<Activation>& acts, Rng& rng,
               double sigmoid_gain = 4.0);

    struct Tape {
        std::vector<Eigen::MatrixXd> values; // values[0] = input, values[i+1] = output of layer i
    };

    struct Grad {
        std::vector<Eigen::MatrixXd> w;
        std::vector<Eigen::VectorXd> b;
    };

    Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;
    Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape& tape) const;

    // d_out: dL/d(output) for the taped batch. Adds parameter gradients into
    // `grad` (which must come from zero_grad()) and returns dL/d(input).
    Eigen::MatrixXd backward(const Tape& tape, const Eigen::MatrixXd& d_out, Grad& grad) const;

    Grad zero_grad() const;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::size_t layer_count() const { return layers_.size(); }

    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

private:
    std::vector<DenseLayer> layers_;
};

// Adam update for one LayerStack.
class AdamOptimizer {
public:
    AdamOptimizer() = default;
    AdamOptimizer(const LayerStack& stack, double learn_rate, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);

    void step(LayerStack& stack, const LayerStack::Grad& grad);

    double learn_rate() const { return lr_; }
    void set_learn_rate(double lr) { lr_ = lr; }

private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
    long t_ = 0;
    LayerStack::Grad m_;
    LayerStack::Grad v_;
};

} // namespace asopt
