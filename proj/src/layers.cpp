#include "asopt/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "asopt/mlp.hpp"

namespace asopt {

LayerStack::LayerStack(const std::vector<std::size_t>& widths, const std::vector<Activation>& acts, Rng& rng,
                       double sigmoid_gain)
{
    if (widths.size() < 2 || acts.size() + 1 != widths.size()) {
        throw std::invalid_argument("LayerStack: need widths.size() == acts.size() + 1 >= 2");
    }
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
        const auto in = static_cast<Eigen::Index>(widths[i]);
        const auto out = static_cast<Eigen::Index>(widths[i + 1]);
        double r = std::sqrt(6.0 / static_cast<double>(widths[i] + widths[i + 1]));
        if (acts[i] == Activation::sigmoid) {
            r *= sigmoid_gain;
        }
        DenseLayer layer;
        layer.w.resize(out, in);
        for (Eigen::Index a = 0; a < out; ++a) {
            for (Eigen::Index c = 0; c < in; ++c) {
                layer.w(a, c) = rng.uniform(-r, r);
            }
        }
        layer.b = Eigen::VectorXd::Zero(out);
        layer.act = acts[i];
        layers_.push_back(std::move(layer));
    }
}

Eigen::MatrixXd LayerStack::forward(const Eigen::MatrixXd& x) const
{
    Tape tape;
    return forward(x, tape);
}

Eigen::MatrixXd LayerStack::forward(const Eigen::MatrixXd& x, Tape& tape) const
{
    if (static_cast<std::size_t>(x.cols()) != input_dim()) {
        throw std::invalid_argument("LayerStack: input has " + std::to_string(x.cols()) + " columns, expected "
                                    + std::to_string(input_dim()));
    }
    tape.values.clear();
    tape.values.push_back(x);
    for (const auto& layer : layers_) {
        Eigen::MatrixXd z = tape.values.back() * layer.w.transpose();
        z.rowwise() += layer.b.transpose();
        if (layer.act == Activation::sigmoid) {
            z = z.unaryExpr([](double v) { return sigmoid(v); });
        }
        tape.values.push_back(std::move(z));
    }
    return tape.values.back();
}

Eigen::MatrixXd LayerStack::backward(const Tape& tape, const Eigen::MatrixXd& d_out, Grad& grad) const
{
    Eigen::MatrixXd delta = d_out;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const DenseLayer& layer = layers_[i];
        const Eigen::MatrixXd& out = tape.values[i + 1];
        if (layer.act == Activation::sigmoid) {
            delta = (delta.array() * out.array() * (1.0 - out.array())).matrix();
        }
        grad.w[i] += delta.transpose() * tape.values[i];
        grad.b[i] += delta.colwise().sum().transpose();
        delta = delta * layer.w;
    }
    return delta;
}

LayerStack::Grad LayerStack::zero_grad() const
{
    Grad g;
    for (const auto& layer : layers_) {
        g.w.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
        g.b.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    }
    return g;
}

std::size_t LayerStack::input_dim() const
{
    return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().w.cols());
}

std::size_t LayerStack::output_dim() const
{
    return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().w.rows());
}

AdamOptimizer::AdamOptimizer(const LayerStack& stack, double learn_rate, double beta1, double beta2, double eps)
    : lr_(learn_rate), beta1_(beta1), beta2_(beta2), eps_(eps), m_(stack.zero_grad()), v_(stack.zero_grad())
{
}

void AdamOptimizer::step(LayerStack& stack, const LayerStack::Grad& grad)
{
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    };
    auto& layers = stack.layers();
    for (std::size_t i = 0; i < layers.size(); ++i) {
        update(layers[i].w, grad.w[i], m_.w[i], v_.w[i]);
        update(layers[i].b, grad.b[i], m_.b[i], v_.b[i]);
    }
}

} // namespace asopt
