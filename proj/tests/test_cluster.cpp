#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "asopt/analysis.hpp"
#include "asopt/cluster.hpp"
#include "asopt/dataset.hpp"
#include "asopt/epmc.hpp"
#include "asopt/verify/oracles.hpp"

using namespace asopt;

namespace {

Eigen::MatrixXd col(std::initializer_list<double> v)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (double x : v) {
        m(i++, 0) = x;
    }
    return m;
}

} // namespace

TEST_CASE("assign")
{
    CHECK(assign(col({0, 10}), col({1, 9})) == std::vector<int>{0, 1});
    CHECK(assign(col({5}), col({4, 6})) == std::vector<int>{0});
    CHECK(assign(col({9}), col({1, 9})) == std::vector<int>{1});

    const Eigen::MatrixXd data = synth_blobs(3, 10, 2, 5.0, 2).data.features;
    const Eigen::MatrixXd c = data.topRows(3);
    const auto labels = assign(data, c);
    const Eigen::MatrixXd reversed = data.colwise().reverse();
    const auto rev = assign(reversed, c);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CHECK(rev[labels.size() - 1 - i] == labels[i]);
    }
}

TEST_CASE("cluster fitness examples")
{
    CHECK(cluster_fitness(col({0, 4}), col({0, 4})) == 0.0);
    CHECK(cluster_fitness(col({0, 4}), col({0, 0, 4, 4})) == 0.0);
    CHECK(cluster_fitness(col({0.5, 4.5}), col({0, 1, 4, 5})) == doctest::Approx(1.0));
    CHECK(cluster_fitness(col({1, 1}), col({0, 1})) == kDegeneratePenalty);

    Rng rng(5);
    for (int k = 0; k < 30; ++k) {
        Eigen::MatrixXd data(5, 2);
        Eigen::MatrixXd c(3, 2);
        for (Eigen::Index i = 0; i < 5; ++i) {
            data.row(i) << rng.uniform(), rng.uniform();
        }
        for (Eigen::Index i = 0; i < 3; ++i) {
            c.row(i) << rng.uniform(), rng.uniform();
        }
        const double f = cluster_fitness(c, data);
        CHECK(f >= 0.0);
        CHECK(f == doctest::Approx(oracle::cluster_fitness_brute_force(c, data, kDegeneratePenalty, kMinSeparation))
                       .epsilon(1e-12));
    }
}

TEST_CASE("init_individual")
{
    const Eigen::MatrixXd data = col({1, 2, 3, 4});
    Rng rng(1);
    ClusterIndividual ind = init_individual(data, 4, rng);
    std::vector<double> rows(ind.centroids.data(), ind.centroids.data() + 4);
    std::sort(rows.begin(), rows.end());
    CHECK(rows == std::vector<double>{1, 2, 3, 4});

    Rng a(9);
    Rng b(9);
    CHECK(init_individual(data, 2, a).centroids == init_individual(data, 2, b).centroids);

    const Eigen::MatrixXd blobs = synth_blobs(3, 20, 3, 8.0, 4).data.features;
    Rng r(2);
    for (int k = 0; k < 20; ++k) {
        CHECK(min_separation(init_individual(blobs, 3, r).centroids) > 0.0);
    }
    CHECK_THROWS(init_individual(data, 5, r));
}

TEST_CASE("rank weights and roulette")
{
    const auto w = rank_weights(15);
    CHECK(w.front() == 1.0);
    CHECK(w.back() == doctest::Approx(1.0 / 15.0));
    for (std::size_t i = 1; i < w.size(); ++i) {
        CHECK(w[i] < w[i - 1]);
    }
    const auto p = learn_probs(rank_weights(2));
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    const auto p15 = learn_probs(w);
    double total = 0.0;
    for (double v : p15) {
        total += v;
    }
    CHECK(std::fabs(total - 1.0) <= 1e-12);

    CHECK(roulette_at({0.5, 0.5}, 0.999) == 1);
    CHECK(roulette_at({0.5, 0.5}, 0.2) == 0);
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        CHECK(roulette({0.0, 1.0, 0.0}, rng) == 1);
    }
    std::vector<int> counts(4, 0);
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        ++counts[roulette({0.25, 0.25, 0.25, 0.25}, rng)];
    }
    const double sigma = std::sqrt(draws * 0.25 * 0.75);
    for (int c : counts) {
        CHECK(std::fabs(c - draws * 0.25) < 3.0 * sigma);
    }
}

TEST_CASE("feel and neighborhoods")
{
    FeelMatrix feel = FeelMatrix::Ones(5, 5);
    feel(0, 1) = 3;
    update_feel(feel, 0, 1, true);
    CHECK(feel(0, 1) == 4);
    update_feel(feel, 0, 2, false);
    CHECK(feel(0, 2) == 1);
    update_feel(feel, 0, 3, true);
    update_feel(feel, 0, 3, true);
    CHECK(feel(0, 3) == 3);

    const FeelMatrix ones = FeelMatrix::Ones(6, 6);
    const NeighborProbs mid = neighbor_probs(ones, 3, 2);
    CHECK(mid.indices == std::vector<std::size_t>{1, 2, 4, 5});
    for (double v : mid.probs) {
        CHECK(v == doctest::Approx(0.25));
    }
    FeelMatrix bumped = ones;
    bumped(3, 4) = 2;
    const NeighborProbs b = neighbor_probs(bumped, 3, 2);
    CHECK(b.probs[2] > b.probs[0]);
    CHECK(neighbor_probs(ones, 0, 2).indices == std::vector<std::size_t>{1, 2});
}

TEST_CASE("elite count, update and acceptance")
{
    CHECK(elite_count(15, 10, 100, 2) == 2);
    CHECK(elite_count(15, 100, 100, 2) == 15);
    CHECK(elite_count(15, 0, 100, 4) == 4);
    for (std::size_t t = 1; t <= 100; ++t) {
        CHECK(elite_count(15, t, 100, 2) >= elite_count(15, t - 1, 100, 2));
    }

    const Eigen::MatrixXd h = Eigen::MatrixXd::Constant(2, 2, 3.0);
    CHECK(epmc_update(h, h, h, 0.8, 0.2) == h);
    const Eigen::MatrixXd m = Eigen::MatrixXd::Constant(2, 2, 7.0);
    CHECK(epmc_update(h, m, h, 1.0, 0.0) == m);
    CHECK(epmc_update(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Constant(1, 1, 10.0),
                      Eigen::MatrixXd::Constant(1, 1, 5.0), 0.8, 0.2)(0, 0)
          == doctest::Approx(9.0));

    CHECK(accept_prob(0) == 1.0);
    CHECK(accept_prob(3) == doctest::Approx(0.0498).epsilon(1e-3));
    CHECK(accept_prob(50) < 3e-22);
    for (std::size_t t = 1; t < 30; ++t) {
        CHECK(accept_prob(t) < accept_prob(t - 1));
    }

    Rng rng(1);
    CHECK(retain_new(2.0, 1.0, 0.0, rng));
    CHECK(retain_new(1.0, 2.0, accept_prob(0), rng));
    int kept = 0;
    for (int k = 0; k < 1000; ++k) {
        kept += retain_new(1.0, 2.0, accept_prob(50), rng);
    }
    CHECK(kept == 0);
}

TEST_CASE("run_epmc")
{
    const BlobData blobs = synth_blobs(3, 40, 4, 10.0, 3);
    EpmcConfig cfg;
    cfg.clusters = 3;
    cfg.iterations = 0;
    cfg.seed = 5;
    const ClusterRunResult zero = run_epmc(blobs.data.features, cfg);
    CHECK(zero.history.size() == 1);
    CHECK(zero.best.fit == zero.history.front().best_fit);

    cfg.iterations = 100;
    std::vector<double> ari;
    for (std::uint64_t s = 1; s <= 25; ++s) {
        cfg.seed = s;
        const ClusterRunResult r = run_epmc(blobs.data.features, cfg);
        for (std::size_t i = 1; i < r.history.size(); ++i) {
            CHECK(r.history[i].best_fit <= r.history[i - 1].best_fit);
            CHECK(r.history[i].n_elite >= cfg.elitnum);
        }
        ari.push_back(adjusted_rand_index(assign(blobs.data.features, r.best.centroids), blobs.labels));
    }
    std::sort(ari.begin(), ari.end());
    CHECK(ari[12] >= 0.8);

    cfg.seed = 3;
    const ClusterRunResult a = run_epmc(blobs.data.features, cfg);
    const ClusterRunResult b = run_epmc(blobs.data.features, cfg);
    CHECK(a.best.centroids == b.best.centroids);
}
