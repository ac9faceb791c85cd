#include "doctest.h"

#include <cmath>

#include "asopt/de.hpp"
#include "asopt/debp.hpp"
#include "asopt/dataset.hpp"

using namespace asopt;

namespace {

std::vector<DeIndividual> pop3()
{
    std::vector<DeIndividual> p(3);
    p[0].x = Eigen::Vector2d(0, 0);
    p[1].x = Eigen::Vector2d(1, 2);
    p[2].x = Eigen::Vector2d(0, 1);
    return p;
}

} // namespace

TEST_CASE("adaptive_f values")
{
    const double phi0 = std::exp(1.0 / 21.0);
    CHECK(adaptive_f(0.9, 20, 0) == doctest::Approx(0.9 * std::pow(2.0, phi0)).epsilon(1e-12));
    CHECK(adaptive_f(1.0, 20, 0) == doctest::Approx(2.0690).epsilon(1e-4));
    CHECK(adaptive_f(1.0, 20, 20) - 1.0 == doctest::Approx(3.9e-9).epsilon(0.05));
    for (std::size_t g = 1; g <= 20; ++g) {
        CHECK(adaptive_f(0.9, 20, g) < adaptive_f(0.9, 20, g - 1));
    }
}

TEST_CASE("mutation examples")
{
    const auto p = pop3();
    CHECK(mutate_with(p, 0, 1, 2, 0.5).isApprox(Eigen::Vector2d(0.5, 0.5)));
    CHECK(mutate_with(p, 0, 1, 1, 0.7) == p[0].x);
    Rng rng(3);
    CHECK(mutate(p, 0, 0.0, rng) == p[0].x);
    const std::vector<std::pair<double, double>> bounds{{0.0, 0.2}, {0.0, 0.2}};
    const Eigen::VectorXd clamped = mutate_with(p, 0, 1, 2, 0.5, bounds);
    CHECK(clamped == Eigen::Vector2d(0.2, 0.2));
}

TEST_CASE("binomial crossover")
{
    Rng rng(1);
    const Eigen::VectorXd t = Eigen::VectorXd::Zero(6);
    const Eigen::VectorXd d = Eigen::VectorXd::Ones(6);
    CHECK(binomial_cross(t, d, 1.0, rng) == d);
    for (int k = 0; k < 20; ++k) {
        CHECK((binomial_cross(t, d, 0.0, rng).array() != 0.0).count() == 1);
    }
    CHECK(binomial_cross(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), 0.0, rng)(0) == 1.0);
}

TEST_CASE("greedy selection")
{
    DeIndividual target{Eigen::VectorXd::Zero(1), 2.0};
    DeIndividual trial{Eigen::VectorXd::Ones(1), 1.0};
    CHECK(&select_greedy(target, trial) == &trial);
    trial.fit = 3.0;
    CHECK(&select_greedy(target, trial) == &target);
    trial.fit = 2.0;
    CHECK(&select_greedy(target, trial) == &trial);
}

TEST_CASE("run_de contracts")
{
    const FitnessFn sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    const Sampler sampler = [](Rng& rng) {
        Eigen::VectorXd x(4);
        for (Eigen::Index j = 0; j < 4; ++j) {
            x(j) = rng.uniform(-5.0, 5.0);
        }
        return x;
    };
    DeConfig cfg;
    cfg.pop_size = 12;
    cfg.max_gen = 40;
    cfg.seed = 2;
    const DeResult a = run_de(sphere, cfg, sampler);
    CHECK(a.best_history.size() == 41);
    for (std::size_t g = 1; g < a.best_history.size(); ++g) {
        CHECK(a.best_history[g] <= a.best_history[g - 1]);
    }
    CHECK(a.best_history.back() < a.best_history.front());
    const DeResult b = run_de(sphere, cfg, sampler);
    CHECK(a.best_history == b.best_history);

    cfg.max_gen = 0;
    const DeResult z = run_de(sphere, cfg, sampler);
    CHECK(z.best.fit == z.best_history.front());

    cfg.max_gen = 10;
    cfg.bounds.assign(4, {-1.0, 1.0});
    std::vector<Eigen::VectorXd> init;
    for (int i = 0; i < 12; ++i) {
        init.push_back(Eigen::VectorXd::Constant(4, -1.0 + i / 6.0));
    }
    bool inside = true;
    const FitnessFn watch = [&](const Eigen::VectorXd& x) {
        inside = inside && (x.array() >= -1.0).all() && (x.array() <= 1.0).all();
        return x.squaredNorm();
    };
    run_de(watch, cfg, init);
    CHECK(inside);
}

TEST_CASE("flatten and unflatten")
{
    CHECK(MlpShape{37, 8, 21}.parameter_count() == 493);
    CHECK(MlpShape{37, 15, 171}.parameter_count() == 3306);
    const MlpNetwork net = init_network(MlpShape{5, 3, 2}, 4);
    const Eigen::VectorXd v = flatten(net);
    CHECK(v.size() == 26);
    CHECK(unflatten(v, net.shape()) == net);
    CHECK_THROWS(unflatten(Eigen::VectorXd::Zero(3), net.shape()));
}

TEST_CASE("train_debp contracts")
{
    const Dataset d = synth_regression(60, 6, 3, 0.05, 1);
    DebpConfig cfg;
    cfg.shape = {6, 3, 3};
    cfg.gd.num_epoch = 30;
    cfg.gd.seed = 4;
    cfg.de.seed = 4;
    cfg.de.pop_size = 8;
    cfg.de.max_gen = 6;
    const DebpResult r = train_debp(d.features, d.targets, cfg);
    for (std::size_t g = 1; g < r.de_history.size(); ++g) {
        CHECK(r.de_history[g] <= r.de_history[g - 1]);
    }
    CHECK(std::fabs(r.gd_curve.front() - r.de_history.back()) <= 1e-9);
    const DebpResult again = train_debp(d.features, d.targets, cfg);
    CHECK(again.net == r.net);

    cfg.de.max_gen = 0;
    const DebpResult plain = train_debp(d.features, d.targets, cfg);
    const TrainResult bp = train_bpnn(d.features, d.targets, cfg.shape, cfg.gd);
    CHECK(plain.net == bp.net);
    CHECK(plain.gd_curve == bp.error_curve);
}
