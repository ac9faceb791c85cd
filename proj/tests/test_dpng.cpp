#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "asopt/dataset.hpp"
#include "asopt/dpng.hpp"

using namespace asopt;

namespace {

Eigen::MatrixXd s(double v)
{
    return Eigen::MatrixXd::Constant(1, 1, v);
}

} // namespace

TEST_CASE("nonlinear weight")
{
    CHECK(nonlinear_weight(0, 100, 0.9, 0.4) == 0.9);
    CHECK(nonlinear_weight(100, 100, 0.9, 0.4) == 0.4);
    CHECK(nonlinear_weight(50, 100, 0.9, 0.4) == doctest::Approx(0.6636).epsilon(1e-4));
    for (std::size_t t = 1; t <= 100; ++t) {
        CHECK(nonlinear_weight(t, 100, 0.9, 0.4) <= nonlinear_weight(t - 1, 100, 0.9, 0.4));
    }
}

TEST_CASE("increments and antennae")
{
    const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(2, 3, 1.5);
    CHECK(increment(h, h, h, 0.8, 0.2).isZero());
    const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(2, 3, 4.0);
    CHECK(increment(h, m, h, 1.0, 0.0) == m - h);
    CHECK(increment(s(0), s(10), s(-5), 0.5, 0.2)(0, 0) == doctest::Approx(4.0));

    CHECK(directional_increment(5.0, s(2), 1.0, 1.0)(0, 0) == 0.0);
    CHECK(directional_increment(5.0, s(2), 1.0, 3.0)(0, 0) == -10.0);
    CHECK(directional_increment(5.0, s(2), 3.0, 1.0)(0, 0) == 10.0);
    AntennaState st{s(1), s(-1), 5.0, 1.0};
    const auto fitness = [](const Eigen::MatrixXd& x) { return x(0, 0) * x(0, 0) + x(0, 0); };
    CHECK(directional_increment(st, s(2), fitness)(0, 0) == 10.0);

    CHECK(decay_step(5.0, 0.8) == doctest::Approx(4.0));
    double sigma = 5.0;
    for (int k = 0; k < 10; ++k) {
        const double next = decay_step(sigma, 0.8);
        CHECK(next < sigma);
        CHECK(next > 0.0);
        sigma = next;
    }
    CHECK(sigma == doctest::Approx(0.537).epsilon(1e-3));
    AntennaState decayed = st;
    decay_antenna(decayed, 0.8, 2.0);
    CHECK(decayed.sigma == doctest::Approx(4.0));
    CHECK(decayed.d == doctest::Approx(2.0));

    const AntennaState moved = update_antennae(st, s(2));
    CHECK(moved.right(0, 0) == 2.0);
    CHECK(moved.left(0, 0) == -2.0);
    CHECK(update_antennae(st, s(0)).right == st.right);
    CHECK((moved.right - moved.left)(0, 0) == doctest::Approx((st.right - st.left)(0, 0) + 2.0 * st.d));
}

TEST_CASE("dpng update")
{
    const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(2, 2, 3.0);
    const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
    CHECK(dpng_update(h, z, z, z, 0.7, 0.5) == h);
    const Eigen::MatrixXd ip = Eigen::MatrixXd::Constant(2, 2, 1.0);
    const Eigen::MatrixXd inc = Eigen::MatrixXd::Constant(2, 2, 2.0);
    CHECK(dpng_update(h, ip, inc, Eigen::MatrixXd::Constant(2, 2, 9.0), 0.5, 1.0) == h + 0.5 * ip + inc);
    CHECK(dpng_update(s(0), s(2), s(4), s(-2), 0.5, 0.5)(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("adaptive crossover and mutation rates")
{
    const DpngConfig cfg;
    CHECK(adaptive_pc(3.0, 2.0, 5.0, cfg) == 0.8);
    CHECK(adaptive_pc(2.0, 2.0, 5.0, cfg) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(adaptive_pc(1.0, 2.0, 2.0, cfg) == 0.8);
    CHECK(adaptive_pm(3.0, 2.0, 5.0, cfg) == 0.05);
    CHECK(adaptive_pm(2.0, 2.0, 5.0, cfg) == doctest::Approx(0.0275).epsilon(1e-12));
    for (int i = 0; i <= 200; ++i) {
        const double f = -20.0 + 0.11 * i;
        const double pc = adaptive_pc(f, 2.0, 5.0, cfg);
        const double pm = adaptive_pm(f, 2.0, 5.0, cfg);
        CHECK(pc >= cfg.pc_min);
        CHECK(pc <= cfg.pc_max);
        CHECK(pm >= cfg.pm_min);
        CHECK(pm <= cfg.pm_max);
    }

    CHECK(sigmoid_response(0.0, 9.903438) == 0.5);
    CHECK(sigmoid_response(1.0, 9.903438) == doctest::Approx(0.99995).epsilon(1e-5));
    for (double r : {-1.0, -0.3, 0.2, 0.7}) {
        CHECK(sigmoid_response(r, 9.903438) + sigmoid_response(-r, 9.903438) == doctest::Approx(1.0));
    }
}

TEST_CASE("genetic operators")
{
    Rng rng(4);
    Eigen::MatrixXd a(3, 2);
    Eigen::MatrixXd b(3, 2);
    a << 1, 2, 3, 4, 5, 6;
    b << 7, 8, 9, 10, 11, 12;
    const auto same = crossover_individuals(a, b, 0.0, rng);
    CHECK(same.first == a);
    CHECK(same.second == b);

    auto rows = [](const Eigen::MatrixXd& m, std::vector<std::pair<double, double>>& out) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            out.emplace_back(m(i, 0), m(i, 1));
        }
    };
    bool full_swap = false;
    for (int k = 0; k < 200; ++k) {
        const auto [x, y] = crossover_individuals(a, b, 1.0, rng);
        std::vector<std::pair<double, double>> before;
        std::vector<std::pair<double, double>> after;
        rows(a, before);
        rows(b, before);
        rows(x, after);
        rows(y, after);
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
        full_swap = full_swap || (x == b && y == a);
    }
    CHECK(full_swap);

    const DataBounds bounds{Eigen::Vector2d(0, 0), Eigen::Vector2d(6, 12)};
    CHECK(mutate_individual(a, 0.0, bounds, rng) == a);
    const Eigen::MatrixXd m = mutate_individual(a, 1.0, bounds, rng);
    CHECK((m.array() != a.array()).all());
    CHECK((m.col(0).array() >= 0.0).all());
    CHECK((m.col(0).array() <= 6.0).all());
    CHECK((m.col(1).array() <= 12.0).all());
}

TEST_CASE("run_dpng_epmc")
{
    const BlobData blobs = synth_blobs(3, 25, 3, 10.0, 8);
    const Eigen::MatrixXd x = minmax_normalize(blobs.data).first.features;
    DpngConfig cfg;
    cfg.base.clusters = 3;
    cfg.base.iterations = 40;
    cfg.base.seed = 2;
    cfg.max_gen = 200;
    const ClusterRunResult r = run_dpng_epmc(x, cfg);
    for (std::size_t i = 1; i < r.history.size(); ++i) {
        CHECK(r.history[i].best_fit <= r.history[i - 1].best_fit);
        CHECK(r.history[i].w <= r.history[i - 1].w);
        CHECK(r.history[i].sigma == doctest::Approx(cfg.sigma0 * std::pow(cfg.eta_step, static_cast<double>(i))));
        CHECK(r.history[i].mean_pc >= cfg.pc_min);
        CHECK(r.history[i].mean_pc <= cfg.pc_max);
    }
    CHECK(r.evaluations <= cfg.evaluation_budget() + 3 * cfg.base.np);
    CHECK((r.best.centroids.array() >= 0.0).all());
    CHECK((r.best.centroids.array() <= 1.0).all());
    const ClusterRunResult again = run_dpng_epmc(x, cfg);
    CHECK(again.best.centroids == r.best.centroids);

    SUBCASE("reduces to EPMC")
    {
        DpngConfig red = cfg;
        red.sigma0 = 0.0;
        red.w_start = 0.0;
        red.w_end = 0.0;
        red.lambda_mix = 1.0;
        red.adaptive_ga = false;
        red.elimination = false;
        red.random_coefficients = false;
        red.base.max_evaluations = red.base.np * (red.base.iterations + 1);
        const ClusterRunResult a = run_dpng_epmc(x, red);
        const ClusterRunResult b = run_epmc(x, red.base);
        REQUIRE(a.history.size() == b.history.size());
        for (std::size_t i = 0; i < a.history.size(); ++i) {
            CHECK(a.history[i].best_fit == b.history[i].best_fit);
            CHECK(a.history[i].mean_fit == b.history[i].mean_fit);
        }
        CHECK(a.best.centroids == b.best.centroids);
    }
}
