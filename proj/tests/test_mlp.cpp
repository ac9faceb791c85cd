#include "doctest.h"

#include "asopt/mlp.hpp"
#include "asopt/rng.hpp"
#include "asopt/verify/oracles.hpp"

using namespace asopt;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed)
{
    Rng rng(seed);
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = rng.uniform();
        }
    }
    return m;
}

double max_rel(const Eigen::MatrixXd& a, const std::vector<long double>& b)
{
    double worst = 0.0;
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j, ++k) {
            const long double s = std::max({std::fabs(static_cast<long double>(a(i, j))), std::fabs(b[k]), 1e-12L});
            worst = std::max(worst, static_cast<double>(std::fabs(a(i, j) - b[k]) / s));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("network shapes")
{
    CHECK(init_network(37, 21, 0, 1).shape() == MlpShape{37, 8, 21});
    const MlpNetwork big = init_network(MlpShape{37, 15, 171}, 1);
    CHECK(big.shape() == MlpShape{37, 15, 171});
    CHECK(init_network(MlpShape{4, 3, 2}, 9) == init_network(MlpShape{4, 3, 2}, 9));
}

TEST_CASE("forward examples")
{
    MlpNetwork z = init_network(MlpShape{3, 2, 2}, 1);
    z.w1.setZero();
    z.w2.setZero();
    CHECK(forward(z, Eigen::Vector3d(1, 2, 3)).isZero());

    MlpNetwork h = init_network(MlpShape{3, 1, 2}, 1);
    h.w1.setZero();
    h.w2.setOnes();
    const Eigen::VectorXd y = forward(h, Eigen::Vector3d(5, -1, 2));
    CHECK(y(0) == 0.5);
    CHECK(y(1) == 0.5);

    const MlpNetwork r = init_network(MlpShape{4, 5, 3}, 2);
    const Eigen::MatrixXd x = random_matrix(6, 4, 3);
    const Eigen::MatrixXd batch = forward_batch(r, x);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        CHECK((batch.row(i).transpose() - forward(r, x.row(i).transpose())).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("mse")
{
    const Eigen::MatrixXd a = random_matrix(4, 3, 1);
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(Eigen::MatrixXd::Ones(1, 2), Eigen::MatrixXd::Zero(1, 2)) == 1.0);
    const Eigen::MatrixXd b = random_matrix(4, 3, 2);
    const Eigen::MatrixXd scaled = a + 3.0 * (b - a);
    CHECK(mse(scaled, a) == doctest::Approx(9.0 * mse(b, a)).epsilon(1e-12));
}

TEST_CASE("backprop against finite differences")
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        MlpNetwork net = init_network(MlpShape{4, 3, 2}, s);
        net.b1.setConstant(0.1);
        const Eigen::MatrixXd x = random_matrix(5, 4, 10 + s);
        const Eigen::MatrixXd y = random_matrix(5, 2, 20 + s);
        const double decay = 0.05 * static_cast<double>(s);
        const Gradients g = backprop(net, x, y, decay);
        const auto fd = oracle::mlp_gradient_fd(net, x, y, decay);
        CHECK(max_rel(g.w1, fd.w1) < 1e-5);
        CHECK(max_rel(g.b1, fd.b1) < 1e-5);
        CHECK(max_rel(g.w2, fd.w2) < 1e-5);
        CHECK(max_rel(g.b2, fd.b2) < 1e-5);
        CHECK(g.objective == doctest::Approx(static_cast<double>(oracle::mlp_objective(net, x, y, decay))));
    }
}

TEST_CASE("backprop stationary point and duplication")
{
    const MlpNetwork net = init_network(MlpShape{3, 4, 2}, 5);
    const Eigen::MatrixXd x = random_matrix(4, 3, 6);
    const Gradients zero = backprop(net, x, forward_batch(net, x), 0.0);
    CHECK(zero.w1.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(zero.w2.cwiseAbs().maxCoeff() < 1e-15);
    CHECK(zero.b2.cwiseAbs().maxCoeff() < 1e-15);

    const Eigen::MatrixXd y = random_matrix(4, 2, 7);
    Eigen::MatrixXd x2(8, 3);
    Eigen::MatrixXd y2(8, 2);
    x2 << x, x;
    y2 << y, y;
    const Gradients a = backprop(net, x, y, 0.01);
    const Gradients b = backprop(net, x2, y2, 0.01);
    CHECK((a.w1 - b.w1).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.w2 - b.w2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("train_gd contracts")
{
    const MlpNetwork net = init_network(MlpShape{3, 4, 2}, 5);
    const Eigen::MatrixXd x = random_matrix(20, 3, 8);
    Eigen::MatrixXd y(20, 2);
    y.col(0) = x.col(0) * 0.5 + x.col(1);
    y.col(1) = x.col(2) - x.col(1);

    GdConfig cfg;
    cfg.num_epoch = 50;
    cfg.learn_rate = 0.0;
    const TrainResult still = train_gd(net, x, y, cfg);
    CHECK(still.net == net);
    CHECK(still.error_curve.size() == 50);
    CHECK(still.error_curve.front() == still.error_curve.back());

    cfg.learn_rate = 0.5;
    cfg.weight_decay = 0.0;
    cfg.num_epoch = 300;
    const TrainResult fit = train_gd(net, x, y, cfg);
    CHECK(fit.error_curve.size() == 300);
    CHECK(mse(forward_batch(fit.net, x), y) < fit.error_curve.front());
    const TrainResult again = train_gd(net, x, y, cfg);
    CHECK(again.error_curve == fit.error_curve);

    GdConfig decay;
    decay.num_epoch = 1;
    decay.learn_rate = 0.1;
    decay.weight_decay = 0.1;
    MlpNetwork w = init_network(MlpShape{2, 3, 2}, 4);
    for (int step = 0; step < 5; ++step) {
        const double before = w.w1.squaredNorm() + w.w2.squaredNorm();
        w = train_gd(w, Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2), decay).net;
        CHECK(w.w1.squaredNorm() + w.w2.squaredNorm() < before);
    }

    GdConfig bad;
    bad.learn_rate = -1.0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("garson importance")
{
    MlpNetwork hand = init_network(MlpShape{2, 1, 1}, 1);
    hand.w1 << 3.0, 1.0;
    hand.w2 << 0.7;
    const Eigen::VectorXd imp = garson_importance(hand);
    CHECK(imp(0) == doctest::Approx(0.75));
    CHECK(imp(1) == doctest::Approx(0.25));

    MlpNetwork one_hot = init_network(MlpShape{4, 3, 2}, 2);
    one_hot.w1.setZero();
    one_hot.w1.col(2).setConstant(0.3);
    const Eigen::VectorXd oh = garson_importance(one_hot);
    CHECK(oh(2) == doctest::Approx(1.0));
    CHECK(oh.sum() == doctest::Approx(1.0));

    const MlpNetwork r = init_network(MlpShape{6, 4, 3}, 8);
    const Eigen::VectorXd ri = garson_importance(r);
    CHECK((ri.array() >= 0.0).all());
    CHECK(std::fabs(ri.sum() - 1.0) <= 1e-9);
    const auto ref = oracle::garson(r);
    for (Eigen::Index i = 0; i < ri.size(); ++i) {
        CHECK(ri(i) == doctest::Approx(static_cast<double>(ref[static_cast<std::size_t>(i)])).epsilon(1e-12));
    }
}

TEST_CASE("network json round trip")
{
    const MlpNetwork net = init_network(MlpShape{3, 2, 4}, 3);
    CHECK(MlpNetwork::from_json(net.to_json()) == net);
}
