#include "asopt/debp.hpp"

#include <stdexcept>
#include <string>

#include "asopt/rng.hpp"

namespace asopt {

Eigen::VectorXd flatten(const MlpNetwork& net)
{
    const MlpShape s = net.shape();
    Eigen::VectorXd v(static_cast<Eigen::Index>(s.parameter_count()));
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < net.w1.rows(); ++r) {
        for (Eigen::Index c = 0; c < net.w1.cols(); ++c) {
            v(k++) = net.w1(r, c);
        }
    }
    for (Eigen::Index r = 0; r < net.b1.size(); ++r) {
        v(k++) = net.b1(r);
    }
    for (Eigen::Index r = 0; r < net.w2.rows(); ++r) {
        for (Eigen::Index c = 0; c < net.w2.cols(); ++c) {
            v(k++) = net.w2(r, c);
        }
    }
    for (Eigen::Index r = 0; r < net.b2.size(); ++r) {
        v(k++) = net.b2(r);
    }
    return v;
}

MlpNetwork unflatten(const Eigen::VectorXd& v, const MlpShape& shape)
{
    if (static_cast<std::size_t>(v.size()) != shape.parameter_count()) {
        throw std::invalid_argument("unflatten: vector has " + std::to_string(v.size()) + " entries, shape needs "
                                    + std::to_string(shape.parameter_count()));
    }
    const auto m = static_cast<Eigen::Index>(shape.inputs);
    const auto h = static_cast<Eigen::Index>(shape.hidden);
    const auto n = static_cast<Eigen::Index>(shape.outputs);
    MlpNetwork net;
    net.w1.resize(h, m);
    net.b1.resize(h);
    net.w2.resize(n, h);
    net.b2.resize(n);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < h; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            net.w1(r, c) = v(k++);
        }
    }
    for (Eigen::Index r = 0; r < h; ++r) {
        net.b1(r) = v(k++);
    }
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < h; ++c) {
            net.w2(r, c) = v(k++);
        }
    }
    for (Eigen::Index r = 0; r < n; ++r) {
        net.b2(r) = v(k++);
    }
    return net;
}

TrainResult train_bpnn(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const MlpShape& shape,
                       const GdConfig& cfg)
{
    return train_gd(init_network(shape, cfg.seed), x, y, cfg);
}

DebpResult train_debp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const DebpConfig& cfg)
{
    if (x.rows() == 0) {
        throw std::invalid_argument("train_debp: empty training set");
    }
    if (static_cast<std::size_t>(x.cols()) != cfg.shape.inputs
        || static_cast<std::size_t>(y.cols()) != cfg.shape.outputs || y.rows() != x.rows()) {
        throw std::invalid_argument("train_debp: data does not match the network shape");
    }

    const MlpNetwork standard = init_network(cfg.shape, cfg.gd.seed);
    DebpResult result;
    MlpNetwork start = standard;

    if (cfg.de.max_gen > 0) {
        std::vector<Eigen::VectorXd> init;
        init.reserve(cfg.de.pop_size);
        init.push_back(flatten(standard));
        for (std::size_t i = 1; i < cfg.de.pop_size; ++i) {
            const std::uint64_t member_seed = mix_seed(Rng::stream(cfg.de.seed, "debp.member", i).next());
            init.push_back(flatten(init_network(cfg.shape, member_seed)));
        }
        const MlpShape shape = cfg.shape;
        auto fitness = [&x, &y, shape](const Eigen::VectorXd& v) {
            return mse(forward_batch(unflatten(v, shape), x), y);
        };
        DeResult de = run_de(fitness, cfg.de, std::move(init));
        start = unflatten(de.best.x, cfg.shape);
        result.de_history = std::move(de.best_history);
        result.de_mean_history = std::move(de.mean_history);
    } else {
        const double initial = mse(forward_batch(standard, x), y);
        result.de_history = {initial};
        result.de_mean_history = {initial};
    }

    TrainResult gd = train_gd(std::move(start), x, y, cfg.gd);
    result.net = std::move(gd.net);
    result.gd_curve = std::move(gd.error_curve);
    return result;
}

} // namespace asopt
