#include "asopt/mlp.hpp"

#include <cmath>

#include "asopt/rng.hpp"

namespace asopt {

namespace {

Eigen::MatrixXd apply_sigmoid(const Eigen::MatrixXd& z)
{
    return z.unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<double> flat_row_major(const Eigen::MatrixXd& m)
{
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.push_back(m(r, c));
        }
    }
    return out;
}

Eigen::MatrixXd from_row_major(const std::vector<double>& v, std::size_t rows, std::size_t cols)
{
    if (v.size() != rows * cols) {
        throw std::invalid_argument("network JSON: matrix has " + std::to_string(v.size())
                                    + " entries, expected " + std::to_string(rows * cols));
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * cols + c];
        }
    }
    return m;
}

Eigen::VectorXd to_vector(const std::vector<double>& v, std::size_t n)
{
    if (v.size() != n) {
        throw std::invalid_argument("network JSON: vector has " + std::to_string(v.size())
                                    + " entries, expected " + std::to_string(n));
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(n));
}

void check_input(const MlpNetwork& net, const Eigen::MatrixXd& x)
{
    if (x.cols() != net.w1.cols()) {
        throw std::invalid_argument("input has " + std::to_string(x.cols()) + " columns, network expects "
                                    + std::to_string(net.w1.cols()));
    }
}

} // namespace

std::size_t hidden_size_rule(std::size_t inputs, std::size_t outputs, int alpha)
{
    const auto base = static_cast<long>(std::lround(std::sqrt(static_cast<double>(inputs + outputs))));
    const long h = base + alpha;
    if (h < 1) {
        throw std::invalid_argument("hidden width rule gives " + std::to_string(h) + " (alpha too small)");
    }
    return static_cast<std::size_t>(h);
}

bool MlpNetwork::all_finite() const
{
    return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

nlohmann::json MlpNetwork::to_json() const
{
    const MlpShape s = shape();
    return {
        {"sizes", {s.inputs, s.hidden, s.outputs}},
        {"W1", flat_row_major(w1)},
        {"b1", std::vector<double>(b1.data(), b1.data() + b1.size())},
        {"W2", flat_row_major(w2)},
        {"b2", std::vector<double>(b2.data(), b2.data() + b2.size())},
    };
}

MlpNetwork MlpNetwork::from_json(const nlohmann::json& j)
{
    const auto sizes = j.at("sizes").get<std::vector<std::size_t>>();
    if (sizes.size() != 3) {
        throw std::invalid_argument("network JSON: 'sizes' must have three entries");
    }
    MlpNetwork net;
    net.w1 = from_row_major(j.at("W1").get<std::vector<double>>(), sizes[1], sizes[0]);
    net.b1 = to_vector(j.at("b1").get<std::vector<double>>(), sizes[1]);
    net.w2 = from_row_major(j.at("W2").get<std::vector<double>>(), sizes[2], sizes[1]);
    net.b2 = to_vector(j.at("b2").get<std::vector<double>>(), sizes[2]);
    return net;
}

MlpNetwork init_network(const MlpShape& shape, std::uint64_t seed)
{
    if (shape.inputs < 1 || shape.hidden < 1 || shape.outputs < 1) {
        throw std::invalid_argument("network layer widths must be >= 1");
    }
    Rng rng = Rng::stream(seed, "mlp.init");
    const auto m = static_cast<Eigen::Index>(shape.inputs);
    const auto h = static_cast<Eigen::Index>(shape.hidden);
    const auto n = static_cast<Eigen::Index>(shape.outputs);

    MlpNetwork net;
    const double r1 = 1.0 / std::sqrt(static_cast<double>(shape.inputs));
    const double r2 = 1.0 / std::sqrt(static_cast<double>(shape.hidden));
    net.w1.resize(h, m);
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            net.w1(r, c) = rng.uniform(-r1, r1);
        }
    }
    net.b1 = Eigen::VectorXd::Zero(h);
    net.w2.resize(n, h);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < h; ++c) {
            net.w2(r, c) = rng.uniform(-r2, r2);
        }
    }
    net.b2 = Eigen::VectorXd::Zero(n);
    return net;
}

MlpNetwork init_network(std::size_t inputs, std::size_t outputs, int alpha, std::uint64_t seed)
{
    return init_network(MlpShape{inputs, hidden_size_rule(inputs, outputs, alpha), outputs}, seed);
}

Eigen::VectorXd forward(const MlpNetwork& net, const Eigen::VectorXd& x)
{
    if (x.size() != net.w1.cols()) {
        throw std::invalid_argument("input has length " + std::to_string(x.size()) + ", network expects "
                                    + std::to_string(net.w1.cols()));
    }
    const Eigen::VectorXd hidden = apply_sigmoid(net.w1 * x + net.b1);
    return net.w2 * hidden + net.b2;
}

Eigen::MatrixXd forward_batch(const MlpNetwork& net, const Eigen::MatrixXd& x)
{
    check_input(net, x);
    Eigen::MatrixXd z = x * net.w1.transpose();
    z.rowwise() += net.b1.transpose();
    Eigen::MatrixXd y = apply_sigmoid(z) * net.w2.transpose();
    y.rowwise() += net.b2.transpose();
    return y;
}

double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target)
{
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        throw std::invalid_argument("mse: shape mismatch");
    }
    if (pred.size() == 0) {
        throw std::invalid_argument("mse: empty batch");
    }
    return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

Gradients backprop(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                   double weight_decay)
{
    check_input(net, x);
    if (x.rows() == 0) {
        throw std::invalid_argument("backprop: empty batch");
    }
    if (y.rows() != x.rows() || y.cols() != net.w2.rows()) {
        throw std::invalid_argument("backprop: target shape mismatch");
    }

    Eigen::MatrixXd z = x * net.w1.transpose();
    z.rowwise() += net.b1.transpose();
    const Eigen::MatrixXd hidden = apply_sigmoid(z);
    Eigen::MatrixXd out = hidden * net.w2.transpose();
    out.rowwise() += net.b2.transpose();
    if (!hidden.allFinite() || !out.allFinite()) {
        throw DivergenceError("backprop: non-finite activation");
    }

    const Eigen::MatrixXd residual = out - y;
    const double count = static_cast<double>(residual.size());

    Gradients g;
    g.mse = residual.squaredNorm() / count;
    g.objective = g.mse + 0.5 * weight_decay * (net.w1.squaredNorm() + net.w2.squaredNorm());

    // d(mse)/d(out) = 2 * residual / (n * N)
    const Eigen::MatrixXd d_out = (2.0 / count) * residual;
    g.w2 = d_out.transpose() * hidden + weight_decay * net.w2;
    g.b2 = d_out.colwise().sum().transpose();

    const Eigen::MatrixXd d_hidden = d_out * net.w2;
    const Eigen::MatrixXd d_z = d_hidden.array() * hidden.array() * (1.0 - hidden.array());
    g.w1 = d_z.transpose() * x + weight_decay * net.w1;
    g.b1 = d_z.colwise().sum().transpose();
    return g;
}

void GdConfig::validate() const
{
    if (!(learn_rate >= 0.0)) {
        throw std::invalid_argument("learn_rate must be >= 0");
    }
    if (!(weight_decay >= 0.0)) {
        throw std::invalid_argument("weight_decay must be >= 0");
    }
}

TrainResult train_gd(MlpNetwork net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                     const GdConfig& cfg)
{
    cfg.validate();
    TrainResult result;
    result.error_curve.reserve(cfg.num_epoch);
    for (std::size_t epoch = 0; epoch < cfg.num_epoch; ++epoch) {
        Gradients g;
        try {
            g = backprop(net, x, y, cfg.weight_decay);
        } catch (const DivergenceError&) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch));
        }
        if (!std::isfinite(g.mse) || !std::isfinite(g.objective)) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch)
                                  + " (non-finite loss)");
        }
        result.error_curve.push_back(g.mse);
        net.w1 -= cfg.learn_rate * g.w1;
        net.b1 -= cfg.learn_rate * g.b1;
        net.w2 -= cfg.learn_rate * g.w2;
        net.b2 -= cfg.learn_rate * g.b2;
        if (!net.all_finite()) {
            throw DivergenceError("training diverged at epoch " + std::to_string(epoch)
                                  + " (non-finite parameter)");
        }
    }
    result.net = std::move(net);
    return result;
}

Eigen::VectorXd garson_importance(const MlpNetwork& net)
{
    const Eigen::MatrixXd a1 = net.w1.cwiseAbs();
    const Eigen::VectorXd outgoing = net.w2.cwiseAbs().colwise().sum().transpose(); // per hidden unit
    Eigen::VectorXd importance = Eigen::VectorXd::Zero(net.w1.cols());
    for (Eigen::Index h = 0; h < a1.rows(); ++h) {
        const double incoming = a1.row(h).sum();
        if (incoming == 0.0) {
            continue;
        }
        importance += (a1.row(h).transpose() / incoming) * outgoing(h);
    }
    const double total = importance.sum();
    if (!(total > 0.0)) {
        throw std::invalid_argument("garson_importance: network has no input-to-output weight path");
    }
    return importance / total;
}

} // namespace asopt
