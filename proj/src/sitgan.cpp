#include "asopt/sitgan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "asopt/mlp.hpp"
#include "asopt/parallel.hpp"

namespace asopt {

namespace {

constexpr double kSigmoidGain = 4.0;
constexpr double kDiscriminatorGain = 0.5;

} // namespace

void GanConfig::validate() const
{
    if (hidden_dim == 0 || num_layer == 0) {
        throw std::invalid_argument("gan: hidden_dim and num_layer must be positive");
    }
    if (!(lambda >= 0.0) || !(eta >= 0.0)) {
        throw std::invalid_argument("gan: lambda and eta must be >= 0");
    }
    if (disc_steps == 0) {
        throw std::invalid_argument("gan: disc_steps must be positive");
    }
    if (batch_size == 0) {
        throw std::invalid_argument("gan: batch_size must be positive");
    }
    if (!(learn_rate > 0.0)) {
        throw std::invalid_argument("gan: learn_rate must be positive");
    }
    if (!(moment_weight >= 0.0) || !(correlation_weight >= 0.0)) {
        throw std::invalid_argument("gan: moment_weight and correlation_weight must be >= 0");
    }
    if (!(weight_average >= 0.0 && weight_average < 1.0)) {
        throw std::invalid_argument("gan: weight_average must be in [0, 1)");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0)) {
        throw std::invalid_argument("gan: beta1 must be in [0, 1)");
    }
}

GanQuartet make_quartet(std::size_t data_dim, const GanConfig& cfg, Rng& rng)
{
    cfg.validate();
    if (data_dim == 0) {
        throw std::invalid_argument("gan: data has no columns");
    }
    const std::size_t h = cfg.hidden_dim;
    const std::size_t nl = cfg.num_layer;
    GanQuartet q;
    q.hidden_dim = h;

    std::vector<std::size_t> w{data_dim};
    w.insert(w.end(), nl, h);
    q.embedder = LayerStack(w, std::vector<Activation>(nl, Activation::sigmoid), rng, kSigmoidGain);

    w.assign(nl + 1, h);
    w.push_back(data_dim);
    std::vector<Activation> acts(nl, Activation::sigmoid);
    acts.push_back(Activation::identity);
    q.recovery = LayerStack(w, acts, rng, kSigmoidGain);

    q.noise_dim = cfg.noise_dim > 0 ? cfg.noise_dim : h;
    w.assign(1, h + q.noise_dim);
    w.insert(w.end(), nl, h);
    q.generator = LayerStack(w, std::vector<Activation>(nl, Activation::sigmoid), rng, kSigmoidGain);

    w.assign(nl + 1, h);
    w.push_back(1);
    q.discriminator = LayerStack(w, std::vector<Activation>(nl + 1, Activation::sigmoid), rng, kDiscriminatorGain);
    return q;
}

static void check_same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch");
    }
}

static double mean_row_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    if (a.rows() == 0) {
        return 0.0;
    }
    return (a - b).rowwise().norm().mean();
}

// d/db of mean_i |a_i - b_i|
static Eigen::MatrixXd mean_row_distance_grad(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    Eigen::MatrixXd g = b - a;
    const double n = static_cast<double>(a.rows());
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        const double norm = g.row(i).norm();
        if (norm > 0.0) {
            g.row(i) /= norm * n;
        } else {
            g.row(i).setZero();
        }
    }
    return g;
}

double reconstruction_loss(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde)
{
    check_same(r, r_tilde, "reconstruction_loss");
    return mean_row_distance(r, r_tilde);
}

Eigen::MatrixXd reconstruction_loss_grad(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde)
{
    check_same(r, r_tilde, "reconstruction_loss");
    return mean_row_distance_grad(r, r_tilde);
}

double supervised_loss(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred)
{
    check_same(h_real, h_pred, "supervised_loss");
    return mean_row_distance(h_real, h_pred);
}

Eigen::MatrixXd supervised_loss_grad(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred)
{
    check_same(h_real, h_pred, "supervised_loss");
    return mean_row_distance_grad(h_real, h_pred);
}

namespace {

struct ColumnMoments {
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd sd;
};

ColumnMoments column_moments(const Eigen::MatrixXd& m)
{
    ColumnMoments c;
    c.mean = m.colwise().mean();
    const Eigen::MatrixXd centered = m.rowwise() - c.mean;
    c.sd = (centered.array().square().colwise().mean() + 1e-6).sqrt();
    return c;
}

} // namespace

double moment_loss(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake)
{
    if (real.cols() != fake.cols() || real.rows() == 0 || fake.rows() == 0) {
        throw std::invalid_argument("moment_loss: need non-empty batches of equal width");
    }
    const ColumnMoments a = column_moments(real);
    const ColumnMoments b = column_moments(fake);
    return (b.sd - a.sd).cwiseAbs().mean() + (b.mean - a.mean).cwiseAbs().mean();
}

Eigen::MatrixXd moment_loss_grad(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake)
{
    if (real.cols() != fake.cols() || real.rows() == 0 || fake.rows() == 0) {
        throw std::invalid_argument("moment_loss: need non-empty batches of equal width");
    }
    const ColumnMoments a = column_moments(real);
    const ColumnMoments b = column_moments(fake);
    const double n = static_cast<double>(fake.rows());
    const double d = static_cast<double>(fake.cols());
    Eigen::MatrixXd g(fake.rows(), fake.cols());
    for (Eigen::Index j = 0; j < fake.cols(); ++j) {
        const double s_sd = (b.sd(j) > a.sd(j)) - (b.sd(j) < a.sd(j));
        const double s_mean = (b.mean(j) > a.mean(j)) - (b.mean(j) < a.mean(j));
        for (Eigen::Index i = 0; i < fake.rows(); ++i) {
            g(i, j) = (s_sd * (fake(i, j) - b.mean(j)) / (n * b.sd(j)) + s_mean / n) / d;
        }
    }
    return g;
}

namespace {

// Pearson correlations of the columns of centered data `c` with column sds `sd`.
Eigen::MatrixXd correlations(const Eigen::MatrixXd& c, const Eigen::RowVectorXd& sd)
{
    const double n = static_cast<double>(c.rows());
    const Eigen::MatrixXd r = (c.transpose() * c) / n;
    return r.array() / (sd.transpose() * sd).array();
}

} // namespace

double correlation_loss(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake)
{
    if (real.cols() != fake.cols() || real.rows() == 0 || fake.rows() == 0) {
        throw std::invalid_argument("correlation_loss: need non-empty batches of equal width");
    }
    const Eigen::Index d = fake.cols();
    if (d < 2) {
        return 0.0;
    }
    const ColumnMoments a = column_moments(real);
    const ColumnMoments b = column_moments(fake);
    const Eigen::MatrixXd ra = correlations(real.rowwise() - a.mean, a.sd);
    const Eigen::MatrixXd rb = correlations(fake.rowwise() - b.mean, b.sd);
    double sum = 0.0;
    for (Eigen::Index k = 1; k < d; ++k) {
        for (Eigen::Index j = 0; j < k; ++j) {
            sum += std::abs(rb(j, k) - ra(j, k));
        }
    }
    return sum / static_cast<double>(d * (d - 1) / 2);
}

Eigen::MatrixXd correlation_loss_grad(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake)
{
    if (real.cols() != fake.cols() || real.rows() == 0 || fake.rows() == 0) {
        throw std::invalid_argument("correlation_loss: need non-empty batches of equal width");
    }
    const Eigen::Index d = fake.cols();
    if (d < 2) {
        return Eigen::MatrixXd::Zero(fake.rows(), d);
    }
    const ColumnMoments a = column_moments(real);
    const ColumnMoments b = column_moments(fake);
    const Eigen::MatrixXd cb = fake.rowwise() - b.mean;
    const Eigen::MatrixXd ra = correlations(real.rowwise() - a.mean, a.sd);
    const Eigen::MatrixXd rb = correlations(cb, b.sd);
    const double pairs = static_cast<double>(d * (d - 1) / 2);
    // g(j, k) = dL/d rho_jk for each unordered pair, stored symmetrically
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (j != k) {
                const double diff = rb(j, k) - ra(j, k);
                g(j, k) = ((diff > 0.0) - (diff < 0.0)) / pairs;
            }
        }
    }
    const double n = static_cast<double>(fake.rows());
    const Eigen::MatrixXd scaled = g.array() / (b.sd.transpose() * b.sd).array();
    const Eigen::VectorXd self
        = (g.array() * rb.array()).rowwise().sum().matrix().cwiseQuotient(b.sd.transpose().cwiseAbs2());
    return (cb * scaled - cb * self.asDiagonal()) / n;
}

static double clamp_prob(double p)
{
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

double unsupervised_loss(const Eigen::VectorXd& y_real, const Eigen::VectorXd& y_fake)
{
    double real = 0.0;
    for (Eigen::Index i = 0; i < y_real.size(); ++i) {
        real += std::log(clamp_prob(y_real(i)));
    }
    double fake = 0.0;
    for (Eigen::Index i = 0; i < y_fake.size(); ++i) {
        fake += std::log(1.0 - clamp_prob(y_fake(i)));
    }
    const double mr = y_real.size() > 0 ? real / static_cast<double>(y_real.size()) : 0.0;
    const double mf = y_fake.size() > 0 ? fake / static_cast<double>(y_fake.size()) : 0.0;
    return mr + mf;
}

namespace {

struct GanTrainer {
    GanQuartet& q;
    const GanConfig& cfg;
    const Eigen::MatrixXd& data; // full scaled training matrix, the moment target
    AdamOptimizer opt_e, opt_r, opt_g, opt_d, opt_g_joint;
    Rng noise;

    GanTrainer(GanQuartet& quartet, const GanConfig& c, const Eigen::MatrixXd& scaled, Rng noise_rng)
        : q(quartet),
          cfg(c),
          data(scaled),
          opt_e(quartet.embedder, c.learn_rate, c.beta1),
          opt_r(quartet.recovery, c.learn_rate, c.beta1),
          opt_g(quartet.generator, c.learn_rate, c.beta1),
          opt_d(quartet.discriminator, c.disc_learn_rate > 0.0 ? c.disc_learn_rate : c.learn_rate, c.beta1),
          opt_g_joint(quartet.generator, c.gen_learn_rate > 0.0 ? c.gen_learn_rate : c.learn_rate, c.beta1),
          noise(std::move(noise_rng))
    {
    }

    Eigen::MatrixXd draw_noise(Eigen::Index n)
    {
        Eigen::MatrixXd z(n, static_cast<Eigen::Index>(q.noise_dim));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < z.cols(); ++j) {
                z(i, j) = noise.normal();
            }
        }
        return z;
    }

    static Eigen::MatrixXd join(const Eigen::MatrixXd& context, const Eigen::MatrixXd& z)
    {
        Eigen::MatrixXd in(z.rows(), context.cols() + z.cols());
        in << context, z;
        return in;
    }

    double autoencoder_step(const Eigen::MatrixXd& x)
    {
        LayerStack::Tape te;
        LayerStack::Tape tr;
        const Eigen::MatrixXd h = q.embedder.forward(x, te);
        const Eigen::MatrixXd xt = q.recovery.forward(h, tr);
        const double l_re = reconstruction_loss(x, xt);
        auto ge = q.embedder.zero_grad();
        auto gr = q.recovery.zero_grad();
        const Eigen::MatrixXd dh = q.recovery.backward(tr, reconstruction_loss_grad(x, xt), gr);
        q.embedder.backward(te, dh, ge);
        opt_e.step(q.embedder, ge);
        opt_r.step(q.recovery, gr);
        return l_re;
    }

    double supervised_step(const Eigen::MatrixXd& x)
    {
        const Eigen::MatrixXd h = q.embedder.forward(x);
        LayerStack::Tape tg;
        const Eigen::MatrixXd hp = q.generator.forward(join(h, draw_noise(x.rows())), tg);
        const double l_s = supervised_loss(h, hp);
        auto gg = q.generator.zero_grad();
        q.generator.backward(tg, supervised_loss_grad(h, hp), gg);
        opt_g.step(q.generator, gg);
        return l_s;
    }

    LossRecord joint_step(const Eigen::MatrixXd& x)
    {
        LossRecord rec;
        const Eigen::Index n = x.rows();
        const auto hd = static_cast<Eigen::Index>(q.hidden_dim);

        // embedder + recovery on lambda * L_S + L_Re
        {
            LayerStack::Tape te;
            LayerStack::Tape tr;
            LayerStack::Tape tg;
            const Eigen::MatrixXd h = q.embedder.forward(x, te);
            const Eigen::MatrixXd xt = q.recovery.forward(h, tr);
            const Eigen::MatrixXd hp = q.generator.forward(join(h, draw_noise(n)), tg);
            rec.l_re = reconstruction_loss(x, xt);
            rec.l_s = supervised_loss(h, hp);

            auto ge = q.embedder.zero_grad();
            auto gr = q.recovery.zero_grad();
            auto g_unused = q.generator.zero_grad();
            Eigen::MatrixXd dh = q.recovery.backward(tr, reconstruction_loss_grad(x, xt), gr);
            if (cfg.lambda > 0.0) {
                const Eigen::MatrixXd ds = cfg.lambda * supervised_loss_grad(h, hp);
                const Eigen::MatrixXd din = q.generator.backward(tg, ds, g_unused);
                dh += din.leftCols(hd) - ds;
            }
            q.embedder.backward(te, dh, ge);
            opt_e.step(q.embedder, ge);
            opt_r.step(q.recovery, gr);
        }

        const Eigen::MatrixXd h = q.embedder.forward(x);
        const Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(n, hd);

        // discriminator ascent on L_U
        for (std::size_t k = 0; k < cfg.disc_steps; ++k) {
            const Eigen::MatrixXd h_fake = q.generator.forward(join(zeros, draw_noise(n)));
            LayerStack::Tape tdr;
            LayerStack::Tape tdf;
            const Eigen::VectorXd yr = q.discriminator.forward(h, tdr).col(0);
            const Eigen::VectorXd yf = q.discriminator.forward(h_fake, tdf).col(0);
            rec.l_u = unsupervised_loss(yr, yf);
            auto gd = q.discriminator.zero_grad();
            // minimize -L_U
            Eigen::MatrixXd dr(n, 1);
            Eigen::MatrixXd df(n, 1);
            const double nn = static_cast<double>(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                dr(i, 0) = -1.0 / (nn * clamp_prob(yr(i)));
                df(i, 0) = 1.0 / (nn * (1.0 - clamp_prob(yf(i))));
            }
            q.discriminator.backward(tdr, dr, gd);
            q.discriminator.backward(tdf, df, gd);
            opt_d.step(q.discriminator, gd);
        }

        // generator on eta * L_S - mean log d(g(0, z))
        {
            auto gg = q.generator.zero_grad();
            if (cfg.eta > 0.0) {
                LayerStack::Tape tg;
                const Eigen::MatrixXd hp = q.generator.forward(join(h, draw_noise(n)), tg);
                q.generator.backward(tg, cfg.eta * supervised_loss_grad(h, hp), gg);
            }
            LayerStack::Tape tg;
            LayerStack::Tape td;
            const Eigen::MatrixXd h_fake = q.generator.forward(join(zeros, draw_noise(n)), tg);
            const Eigen::VectorXd yf = q.discriminator.forward(h_fake, td).col(0);
            Eigen::MatrixXd df(n, 1);
            const double nn = static_cast<double>(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                df(i, 0) = -1.0 / (nn * clamp_prob(yf(i)));
            }
            auto gd_unused = q.discriminator.zero_grad();
            Eigen::MatrixXd dh = q.discriminator.backward(td, df, gd_unused);
            if (cfg.moment_weight > 0.0 || cfg.correlation_weight > 0.0) {
                LayerStack::Tape tr;
                const Eigen::MatrixXd x_fake = q.recovery.forward(h_fake, tr);
                Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(x_fake.rows(), x_fake.cols());
                if (cfg.moment_weight > 0.0) {
                    dx += cfg.moment_weight * moment_loss_grad(data, x_fake);
                }
                if (cfg.correlation_weight > 0.0) {
                    dx += cfg.correlation_weight * correlation_loss_grad(data, x_fake);
                }
                auto gr_unused = q.recovery.zero_grad();
                dh += q.recovery.backward(tr, dx, gr_unused);
            }
            q.generator.backward(tg, dh, gg);
            opt_g_joint.step(q.generator, gg);
        }
        return rec;
    }
};

void check_finite(const LossRecord& r)
{
    if (!std::isfinite(r.l_re) || !std::isfinite(r.l_s) || !std::isfinite(r.l_u)) {
        throw DivergenceError("sitgan: non-finite loss in phase '" + r.phase + "' at step "
                              + std::to_string(r.step));
    }
}

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch, Rng& rng)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.index(i)]);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < n; s += batch) {
        out.emplace_back(idx.begin() + static_cast<std::ptrdiff_t>(s),
                         idx.begin() + static_cast<std::ptrdiff_t>(std::min(n, s + batch)));
    }
    return out;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

std::vector<ColumnRange> fit_ranges(const Eigen::MatrixXd& m)
{
    std::vector<ColumnRange> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        r[static_cast<std::size_t>(c)] = {m.col(c).minCoeff(), m.col(c).maxCoeff()};
    }
    return r;
}

Eigen::MatrixXd scale(const Eigen::MatrixXd& m, const std::vector<ColumnRange>& ranges)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const ColumnRange& r = ranges[static_cast<std::size_t>(c)];
        if (r.constant()) {
            out.col(c).setConstant(0.5);
        } else {
            out.col(c) = (m.col(c).array() - r.min) / (r.max - r.min);
        }
    }
    return out;
}

Eigen::MatrixXd unscale(const Eigen::MatrixXd& m, const std::vector<ColumnRange>& ranges)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const ColumnRange& r = ranges[static_cast<std::size_t>(c)];
        if (r.constant()) {
            out.col(c).setConstant(r.min);
        } else {
            out.col(c) = m.col(c).array() * (r.max - r.min) + r.min;
        }
    }
    return out;
}

} // namespace

GanTrainResult train_sitgan(const Eigen::MatrixXd& joint, const GanConfig& cfg)
{
    Dataset d;
    d.features = joint;
    d.targets.resize(joint.rows(), 0);
    d.schema = FeatureSchema::generic(static_cast<std::size_t>(joint.cols()), 0);
    return train_sitgan(d, cfg);
}

GanTrainResult train_sitgan(const Dataset& train, const GanConfig& cfg)
{
    cfg.validate();
    const std::size_t n = train.rows();
    if (n == 0) {
        throw std::invalid_argument("train_sitgan: empty training set");
    }
    Eigen::MatrixXd joint(train.features.rows(), train.features.cols() + train.targets.cols());
    joint << train.features, train.targets;
    if (!joint.allFinite()) {
        throw DataError("train_sitgan: training data contains non-finite values");
    }

    Rng init_rng = Rng::stream(cfg.seed, "sitgan.init");
    Rng batch_rng = Rng::stream(cfg.seed, "sitgan.batch");
    GanTrainResult result;
    GanQuartet& q = result.quartet;
    q = make_quartet(static_cast<std::size_t>(joint.cols()), cfg, init_rng);
    q.ranges = fit_ranges(joint);
    q.schema = train.schema;
    q.norm_state = train.norm_state;
    const Eigen::MatrixXd x = scale(joint, q.ranges);

    GanTrainer tr(q, cfg, x, Rng::stream(cfg.seed, "sitgan.noise"));

    auto run_phase = [&](const char* phase, std::size_t epochs, auto&& step_fn) {
        std::size_t step = 0;
        for (std::size_t e = 0; e < epochs; ++e) {
            for (const auto& b : epoch_batches(n, cfg.batch_size, batch_rng)) {
                LossRecord rec = step_fn(gather(x, b));
                rec.phase = phase;
                rec.step = step++;
                check_finite(rec);
                result.losses.push_back(std::move(rec));
            }
        }
    };

    run_phase("autoencoder", cfg.ae_epochs, [&](const Eigen::MatrixXd& xb) {
        LossRecord r;
        r.l_re = tr.autoencoder_step(xb);
        return r;
    });
    run_phase("supervised", cfg.sup_epochs, [&](const Eigen::MatrixXd& xb) {
        LossRecord r;
        r.l_s = tr.supervised_step(xb);
        return r;
    });
    const double ema = cfg.weight_average;
    LayerStack g_avg = q.generator;
    LayerStack r_avg = q.recovery;
    auto blend = [ema](LayerStack& avg, const LayerStack& cur) {
        for (std::size_t l = 0; l < avg.layers().size(); ++l) {
            avg.layers()[l].w = ema * avg.layers()[l].w + (1.0 - ema) * cur.layers()[l].w;
            avg.layers()[l].b = ema * avg.layers()[l].b + (1.0 - ema) * cur.layers()[l].b;
        }
    };
    run_phase("joint", cfg.iterations, [&](const Eigen::MatrixXd& xb) {
        LossRecord r = tr.joint_step(xb);
        blend(g_avg, q.generator);
        blend(r_avg, q.recovery);
        return r;
    });
    if (ema > 0.0 && cfg.iterations > 0) {
        q.generator = g_avg;
        q.recovery = r_avg;
    }
    return result;
}

Eigen::MatrixXd generate_normalized(const GanQuartet& q, std::size_t n, Rng& rng)
{
    const auto rows = static_cast<Eigen::Index>(n);
    const auto hd = static_cast<Eigen::Index>(q.hidden_dim);
    if (n == 0) {
        return Eigen::MatrixXd(0, static_cast<Eigen::Index>(q.data_dim()));
    }
    const auto zd = static_cast<Eigen::Index>(q.noise_dim);
    Eigen::MatrixXd in = Eigen::MatrixXd::Zero(rows, hd + zd);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < zd; ++j) {
            in(i, hd + j) = rng.normal();
        }
    }
    return q.recovery.forward(q.generator.forward(in)).cwiseMax(0.0).cwiseMin(1.0);
}

Dataset generate(const GanQuartet& q, std::size_t n, Rng& rng)
{
    const Eigen::MatrixXd joint = unscale(generate_normalized(q, n, rng), q.ranges);
    const auto f = static_cast<Eigen::Index>(q.schema.feature_names.size());
    Dataset d;
    d.schema = q.schema;
    d.norm_state = q.norm_state;
    d.features = joint.leftCols(f);
    d.targets = joint.rightCols(joint.cols() - f);
    return d;
}

std::string to_string(Trainer t)
{
    return t == Trainer::bpnn ? "bpnn" : "debp";
}

Trainer parse_trainer(const std::string& s)
{
    if (s == "bpnn") {
        return Trainer::bpnn;
    }
    if (s == "debp" || s == "de-bp") {
        return Trainer::debp;
    }
    throw std::invalid_argument("unknown model '" + s + "' (expected bpnn or debp)");
}

double train_and_score(const Dataset& train, const Dataset& test, Trainer model, std::uint64_t seed,
                       const DebpConfig& base)
{
    DebpConfig cfg = base;
    cfg.de.seed = seed;
    cfg.gd.seed = seed;
    if (cfg.shape.inputs == 0) {
        cfg.shape = {train.feature_count(), hidden_size_rule(train.feature_count(), train.target_count(), 0),
                     train.target_count()};
    }
    MlpNetwork net;
    if (model == Trainer::bpnn) {
        net = train_bpnn(train.features, train.targets, cfg.shape, cfg.gd).net;
    } else {
        net = train_debp(train.features, train.targets, cfg).net;
    }
    return mse(forward_batch(net, test.features), test.targets);
}

AugmentReport augmentation_experiment(const Dataset& train, const Dataset& test, const GanQuartet& q,
                                      const std::vector<std::size_t>& sizes, const std::vector<Trainer>& models,
                                      const std::vector<std::uint64_t>& seeds, const DebpConfig& base)
{
    if (q.data_dim() != train.feature_count() + train.target_count()) {
        throw std::invalid_argument("augmentation_experiment: quartet width does not match the training data");
    }
    // merged training sets per (size, seed)
    const std::size_t n_sets = sizes.size() * seeds.size();
    std::vector<Dataset> merged(n_sets);
    parallel_for(n_sets, [&](std::size_t k) {
        const std::size_t size = sizes[k / seeds.size()];
        const std::uint64_t seed = seeds[k % seeds.size()];
        if (size == 0) {
            merged[k] = train;
            return;
        }
        Rng rng = Rng::stream(seed, "augment.generate", size);
        merged[k] = concat(train, generate(q, size, rng));
    });

    AugmentReport report;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        for (std::size_t ki = 0; ki < seeds.size(); ++ki) {
            for (Trainer m : models) {
                report.cells.push_back({sizes[si], seeds[ki], m, 0.0});
            }
        }
    }
    parallel_for(report.cells.size(), [&](std::size_t c) {
        AugmentCell& cell = report.cells[c];
        const std::size_t set = c / models.size();
        cell.test_mse = train_and_score(merged[set], test, cell.model, cell.seed, base);
    });

    for (std::size_t si = 0; si < sizes.size(); ++si) {
        for (Trainer m : models) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& cell : report.cells) {
                if (cell.size == sizes[si] && cell.model == m) {
                    sum += cell.test_mse;
                    ++count;
                }
            }
            report.means.push_back({sizes[si], m, count > 0 ? sum / static_cast<double>(count) : 0.0});
        }
    }
    return report;
}

} // namespace asopt
