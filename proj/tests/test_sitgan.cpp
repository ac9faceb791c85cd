#include "doctest.h"

#include <cmath>
#include <functional>

#include "asopt/dataset.hpp"
#include "asopt/sitgan.hpp"
#include "asopt/verify/oracles.hpp"

using namespace asopt;

namespace {

Eigen::MatrixXd uniform(Eigen::Index r, Eigen::Index c, Rng& rng)
{
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = rng.uniform();
        }
    }
    return m;
}

// Max relative error between the analytic gradient of `stack`'s parameters
// and central differences of `loss`, over a sample of weights in every layer.
double fd_check(LayerStack& stack, const LayerStack::Grad& grad, const std::function<double()>& loss)
{
    double worst = 0.0;
    const double h = 1e-6;
    for (std::size_t l = 0; l < stack.layers().size(); ++l) {
        Eigen::MatrixXd& w = stack.layers()[l].w;
        for (Eigen::Index k = 0; k < std::min<Eigen::Index>(w.size(), 6); ++k) {
            double& p = w.data()[(k * 7) % w.size()];
            const double saved = p;
            p = saved + h;
            const double up = loss();
            p = saved - h;
            const double down = loss();
            p = saved;
            const double fd = (up - down) / (2.0 * h);
            const double an = grad.w[l].data()[(k * 7) % w.size()];
            const double scale = std::max({std::fabs(fd), std::fabs(an), 1e-7});
            worst = std::max(worst, std::fabs(fd - an) / scale);
        }
        Eigen::VectorXd& b = stack.layers()[l].b;
        const double saved = b(0);
        b(0) = saved + h;
        const double up = loss();
        b(0) = saved - h;
        const double down = loss();
        b(0) = saved;
        const double fd = (up - down) / (2.0 * h);
        const double scale = std::max({std::fabs(fd), std::fabs(grad.b[l](0)), 1e-7});
        worst = std::max(worst, std::fabs(fd - grad.b[l](0)) / scale);
    }
    return worst;
}

Eigen::MatrixXd with_noise(Eigen::Index rows, std::size_t h, std::size_t z, Rng& rng)
{
    Eigen::MatrixXd in = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(h + z));
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(z); ++j) {
            in(i, static_cast<Eigen::Index>(h) + j) = rng.normal();
        }
    }
    return in;
}

} // namespace

TEST_CASE("loss examples")
{
    Eigen::MatrixXd r(1, 2);
    r << 3, 4;
    CHECK(reconstruction_loss(r, Eigen::MatrixXd::Zero(1, 2)) == 5.0);
    CHECK(reconstruction_loss(r, r) == 0.0);
    Eigen::MatrixXd h(1, 2);
    h << 1, 0;
    CHECK(supervised_loss(h, Eigen::MatrixXd::Zero(1, 2)) == 1.0);
    CHECK(supervised_loss(h, h) == 0.0);

    const Eigen::VectorXd half = Eigen::VectorXd::Constant(4, 0.5);
    CHECK(unsupervised_loss(half, half) == doctest::Approx(2.0 * std::log(0.5)));
    const double perfect = unsupervised_loss(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Zero(3));
    CHECK(perfect <= 0.0);
    CHECK(perfect > -1e-6);

    Rng rng(3);
    for (int k = 0; k < 10; ++k) {
        const Eigen::MatrixXd a = uniform(3, 4, rng);
        const Eigen::MatrixXd b = uniform(3, 4, rng);
        CHECK(reconstruction_loss(a, b) == doctest::Approx(static_cast<double>(oracle::reconstruction_loss(a, b))));
        CHECK(reconstruction_loss(a.colwise().reverse(), b.colwise().reverse())
              == doctest::Approx(reconstruction_loss(a, b)));
        CHECK(supervised_loss(a, b) >= 0.0);
        const Eigen::VectorXd yr = uniform(3, 1, rng);
        const Eigen::VectorXd yf = uniform(3, 1, rng);
        const double u = unsupervised_loss(yr, yf);
        CHECK(u <= 0.0);
        CHECK(std::fabs(u - static_cast<double>(oracle::unsupervised_loss(yr, yf, kProbClamp))) <= 1e-9);
    }
}

TEST_CASE("moment and correlation gradients")
{
    Rng rng(11);
    const Eigen::MatrixXd real = uniform(40, 3, rng);
    Eigen::MatrixXd fake = uniform(25, 3, rng);
    fake.col(2) = 0.5 * fake.col(0) + 0.2 * fake.col(2);
    for (const auto& [loss, grad] :
         {std::pair{&moment_loss, &moment_loss_grad}, std::pair{&correlation_loss, &correlation_loss_grad}}) {
        const Eigen::MatrixXd g = grad(real, fake);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < fake.rows(); i += 4) {
            for (Eigen::Index j = 0; j < fake.cols(); ++j) {
                Eigen::MatrixXd up = fake;
                Eigen::MatrixXd down = fake;
                up(i, j) += 1e-6;
                down(i, j) -= 1e-6;
                const double fd = (loss(real, up) - loss(real, down)) / 2e-6;
                worst = std::max(worst, std::fabs(fd - g(i, j)) / std::max({std::fabs(fd), std::fabs(g(i, j)), 1e-6}));
            }
        }
        CHECK(worst < 1e-4);
    }
    CHECK(correlation_loss(real, real) == doctest::Approx(0.0));
    CHECK(correlation_loss(real.leftCols(1), fake.leftCols(1)) == 0.0);
}

TEST_CASE("composed path gradients")
{
    GanConfig cfg;
    cfg.hidden_dim = 5;
    cfg.noise_dim = 3;
    Rng rng(2);
    GanQuartet q = make_quartet(4, cfg, rng);
    const Eigen::MatrixXd x = uniform(6, 4, rng);

    SUBCASE("embedder -> recovery")
    {
        const auto loss = [&] { return reconstruction_loss(x, q.recovery.forward(q.embedder.forward(x))); };
        LayerStack::Tape te;
        LayerStack::Tape tr;
        const Eigen::MatrixXd hidden = q.embedder.forward(x, te);
        const Eigen::MatrixXd out = q.recovery.forward(hidden, tr);
        auto ge = q.embedder.zero_grad();
        auto gr = q.recovery.zero_grad();
        const Eigen::MatrixXd dh = q.recovery.backward(tr, reconstruction_loss_grad(x, out), gr);
        q.embedder.backward(te, dh, ge);
        CHECK(fd_check(q.embedder, ge, loss) < 1e-4);
        CHECK(fd_check(q.recovery, gr, loss) < 1e-4);
    }
    SUBCASE("generator -> discriminator")
    {
        const Eigen::MatrixXd in = with_noise(6, q.hidden_dim, q.noise_dim, rng);
        const auto loss = [&] {
            const Eigen::MatrixXd d = q.discriminator.forward(q.generator.forward(in));
            return -d.array().log().mean();
        };
        LayerStack::Tape tg;
        LayerStack::Tape td;
        const Eigen::MatrixXd d = q.discriminator.forward(q.generator.forward(in, tg), td);
        auto gg = q.generator.zero_grad();
        auto gd = q.discriminator.zero_grad();
        const Eigen::MatrixXd dd = -(d.array().inverse() / static_cast<double>(d.rows())).matrix();
        q.generator.backward(tg, q.discriminator.backward(td, dd, gd), gg);
        CHECK(fd_check(q.generator, gg, loss) < 1e-4);
        CHECK(fd_check(q.discriminator, gd, loss) < 1e-4);
    }
    SUBCASE("generator -> recovery")
    {
        const Eigen::MatrixXd in = with_noise(8, q.hidden_dim, q.noise_dim, rng);
        const auto loss = [&] { return moment_loss(x, q.recovery.forward(q.generator.forward(in))); };
        LayerStack::Tape tg;
        LayerStack::Tape tr;
        const Eigen::MatrixXd fake = q.recovery.forward(q.generator.forward(in, tg), tr);
        auto gg = q.generator.zero_grad();
        auto gr = q.recovery.zero_grad();
        q.generator.backward(tg, q.recovery.backward(tr, moment_loss_grad(x, fake), gr), gg);
        CHECK(fd_check(q.generator, gg, loss) < 1e-4);
    }
}

TEST_CASE("train_sitgan contracts")
{
    Rng rng(42);
    Eigen::MatrixXd x(200, 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = 0.5 * rng.normal();
    }
    GanConfig cfg;
    cfg.seed = 3;
    cfg.hidden_dim = 8;
    cfg.ae_epochs = 400;
    cfg.sup_epochs = 5;
    cfg.iterations = 5;
    cfg.batch_size = 32;
    const GanTrainResult r = train_sitgan(x, cfg);
    double first_re = -1.0;
    double last_re = 0.0;
    for (const auto& rec : r.losses) {
        CHECK(std::isfinite(rec.l_re));
        CHECK(std::isfinite(rec.l_s));
        CHECK(std::isfinite(rec.l_u));
        if (rec.phase == "autoencoder") {
            if (first_re < 0.0) {
                first_re = rec.l_re;
            }
            last_re = rec.l_re;
        }
    }
    CHECK(last_re < first_re);

    const Eigen::RowVectorXd lo = x.colwise().minCoeff();
    const Eigen::RowVectorXd span = x.colwise().maxCoeff() - lo;
    const Eigen::MatrixXd scaled = (x.rowwise() - lo).array().rowwise() / span.array();
    CHECK(last_re < 0.1 * scaled.rowwise().norm().mean());

    const GanTrainResult again = train_sitgan(x, cfg);
    REQUIRE(again.losses.size() == r.losses.size());
    CHECK(again.losses.back().l_u == r.losses.back().l_u);

    Rng g(1);
    CHECK(generate(r.quartet, 0, g).rows() == 0);
    const Eigen::MatrixXd rows = generate_normalized(r.quartet, 1186, g);
    CHECK(rows.rows() == 1186);
    CHECK((rows.array() >= 0.0).all());
    CHECK((rows.array() <= 1.0).all());
}

TEST_CASE("augmentation experiment")
{
    const Dataset d = synth_regression(80, 4, 2, 0.05, 3);
    auto [train_raw, test_raw] = split(d, {0.8, 1.0});
    auto [train, params] = minmax_normalize(train_raw);
    const Dataset test = apply_minmax(test_raw, params);
    GanConfig g;
    g.hidden_dim = 6;
    g.iterations = 3;
    g.ae_epochs = 3;
    g.sup_epochs = 3;
    const GanTrainResult gan = train_sitgan(train, g);
    CHECK(gan.quartet.data_dim() == 6);

    DebpConfig base;
    base.gd.num_epoch = 30;
    base.de.pop_size = 5;
    base.de.max_gen = 2;
    const std::vector<std::size_t> sizes{0, 10, 64};
    const std::vector<Trainer> models{Trainer::bpnn, Trainer::debp};
    const std::vector<std::uint64_t> seeds{1, 2};
    const AugmentReport rep = augmentation_experiment(train, test, gan.quartet, sizes, models, seeds, base);
    CHECK(rep.cells.size() == sizes.size() * models.size() * seeds.size());
    CHECK(rep.means.size() == sizes.size() * models.size());
    for (const auto& c : rep.cells) {
        if (c.size == 0) {
            CHECK(c.test_mse == train_and_score(train, test, c.model, c.seed, base));
        }
    }
    CHECK(parse_trainer("debp") == Trainer::debp);
    CHECK_THROWS(parse_trainer("svm"));
}
