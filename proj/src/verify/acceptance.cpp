#include "asopt/verify/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "asopt/analysis.hpp"
#include "asopt/cluster.hpp"
#include "asopt/commands.hpp"
#include "asopt/config.hpp"
#include "asopt/dataset.hpp"
#include "asopt/de.hpp"
#include "asopt/debp.hpp"
#include "asopt/dpng.hpp"
#include "asopt/epmc.hpp"
#include "asopt/io.hpp"
#include "asopt/mlp.hpp"
#include "asopt/rng.hpp"
#include "asopt/sitgan.hpp"
#include "asopt/verify/oracles.hpp"

namespace asopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi, Rng& rng)
{
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = rng.uniform(lo, hi);
        }
    }
    return m;
}

// 1. backprop vs finite differences
Outcome gradient_oracle()
{
    const std::vector<MlpShape> shapes{{37, 8, 21}, {3, 4, 2}, {5, 3, 1}, {2, 6, 3}, {10, 5, 4}};
    const std::vector<double> decays{0.0, 1e-2, 0.1};
    double worst = 0.0;
    for (std::size_t c = 0; c < 20; ++c) {
        const MlpShape shape = shapes[c % shapes.size()];
        const double decay = decays[c % decays.size()];
        Rng rng = Rng::stream(1, "acceptance.gradient", c);
        MlpNetwork net = init_network(shape, 100 + c);
        net.w1 *= 3.0;
        net.b1 = uniform_matrix(net.b1.size(), 1, -0.5, 0.5, rng);
        net.b2 = uniform_matrix(net.b2.size(), 1, -0.5, 0.5, rng);
        const Eigen::Index rows = 3 + static_cast<Eigen::Index>(c % 7);
        const Eigen::MatrixXd x = uniform_matrix(rows, static_cast<Eigen::Index>(shape.inputs), 0.0, 1.0, rng);
        const Eigen::MatrixXd y = uniform_matrix(rows, static_cast<Eigen::Index>(shape.outputs), 0.0, 1.0, rng);

        const Gradients g = backprop(net, x, y, decay);
        const oracle::FlatGradient fd = oracle::mlp_gradient_fd(net, x, y, decay);
        auto compare = [&](const Eigen::MatrixXd& m, const std::vector<long double>& ref) {
            std::size_t k = 0;
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index j = 0; j < m.cols(); ++j, ++k) {
                    const long double a = m(i, j);
                    const long double b = ref[k];
                    const long double scale = std::max({std::fabs(a), std::fabs(b), 1e-12L});
                    worst = std::max(worst, static_cast<double>(std::fabs(a - b) / scale));
                }
            }
        };
        compare(g.w1, fd.w1);
        compare(g.b1, fd.b1);
        compare(g.w2, fd.w2);
        compare(g.b2, fd.b2);
    }
    return {worst < 1e-5, "20 cases, max relative error " + num(worst)};
}

// 2. closed-form pieces vs long double evaluations
Outcome formula_fidelity()
{
    double worst = 0.0;
    std::size_t points = 0;
    bool exact = true;
    auto track = [&](double a, long double b) {
        worst = std::max(worst, static_cast<double>(std::fabs(static_cast<long double>(a) - b)));
        ++points;
    };

    for (std::size_t g = 0; g <= 20; ++g) {
        track(adaptive_f(0.9, 20, g), oracle::adaptive_f(0.9L, 20, g));
        track(adaptive_f(0.5, 200, g * 10), oracle::adaptive_f(0.5L, 200, g * 10));
    }
    for (std::size_t t = 0; t <= 100; t += 5) {
        track(nonlinear_weight(t, 100, 0.9, 0.4), oracle::nonlinear_weight(t, 100, 0.9L, 0.4L));
    }
    exact = exact && nonlinear_weight(0, 100, 0.9, 0.4) == 0.9 && nonlinear_weight(100, 100, 0.9, 0.4) == 0.4;
    for (std::size_t t = 0; t <= 100; t += 5) {
        for (std::size_t elit : {std::size_t{0}, std::size_t{2}, std::size_t{7}}) {
            exact = exact && elite_count(15, t, 100, elit) == oracle::elite_count(15, t, 100, elit);
            ++points;
        }
    }
    for (std::size_t t = 0; t <= 30; ++t) {
        track(accept_prob(t), oracle::accept_prob(t));
    }
    for (int i = 0; i <= 20; ++i) {
        const double r = -1.0 + 0.1 * i;
        track(sigmoid_response(r, 9.903438), oracle::sigmoid_response(r, 9.903438L));
    }

    DpngConfig cfg;
    const double f_avg = 2.0;
    const double f_max = 6.0;
    for (int i = 0; i <= 24; ++i) {
        const double f = -4.0 + 0.5 * i; // covers r < -1, [-1, 0] and f > f_avg
        track(adaptive_pc(f, f_avg, f_max, cfg),
              oracle::adaptive_rate(f, f_avg, f_max, cfg.pc_min, cfg.pc_max, cfg.a));
        track(adaptive_pm(f, f_avg, f_max, cfg),
              oracle::adaptive_rate(f, f_avg, f_max, cfg.pm_min, cfg.pm_max, cfg.a));
    }
    track(adaptive_pc(1.0, 3.0, 3.0, cfg), oracle::adaptive_rate(1.0L, 3.0L, 3.0L, 0.5L, 0.8L, cfg.a));
    const double branch = adaptive_pc(f_avg, f_avg, f_max, cfg);
    const double branch_err = std::fabs(branch - 0.65);

    const bool pass = exact && worst <= 1e-12 && branch_err <= 1e-12;
    return {pass, std::to_string(points) + " points, max abs error " + num(worst) + ", Pc(f_avg) = "
                      + num(branch) + (exact ? ", exact checks ok" : ", exact checks FAILED")};
}

// 3. fitness vs enumeration
Outcome fitness_oracle()
{
    Rng rng = Rng::stream(3, "acceptance.fitness");
    double worst = 0.0;
    std::size_t penalties = 0;
    for (std::size_t inst = 0; inst < 100; ++inst) {
        const auto n = static_cast<Eigen::Index>(1 + rng.index(6));
        const auto l = static_cast<Eigen::Index>(2 + rng.index(2));
        const auto k = static_cast<Eigen::Index>(1 + rng.index(2));
        const Eigen::MatrixXd data = uniform_matrix(n, k, -2.0, 2.0, rng);
        Eigen::MatrixXd centroids = uniform_matrix(l, k, -2.0, 2.0, rng);
        if (inst % 10 == 9) {
            centroids.row(l - 1) = centroids.row(0);
        }
        const double got = cluster_fitness(centroids, data);
        const double ref = oracle::cluster_fitness_brute_force(centroids, data, kDegeneratePenalty, kMinSeparation);
        penalties += ref == kDegeneratePenalty;
        worst = std::max(worst, std::fabs(got - ref) / std::max(1.0, std::fabs(ref)));
    }
    return {worst <= 1e-9, "100 instances (" + std::to_string(penalties) + " degenerate), max relative error "
                               + num(worst)};
}

// 4. DE on the sphere
Outcome de_sphere()
{
    const FitnessFn sphere = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    const Sampler sampler = [](Rng& rng) {
        Eigen::VectorXd x(10);
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            x(j) = rng.uniform(-5.12, 5.12);
        }
        return x;
    };
    std::size_t reached = 0;
    bool monotone = true;
    std::string bests;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DeConfig cfg;
        cfg.pop_size = 30;
        cfg.max_gen = 200;
        cfg.seed = seed;
        const DeResult r = run_de(sphere, cfg, sampler);
        reached += r.best.fit < 1e-3;
        for (std::size_t g = 1; g < r.best_history.size(); ++g) {
            monotone = monotone && r.best_history[g] <= r.best_history[g - 1];
        }
        bests += (seed > 1 ? " " : "") + num(r.best.fit);
    }
    return {reached >= 4 && monotone, std::to_string(reached) + "/5 below 1e-3, history "
                                          + (monotone ? "non-increasing" : "NOT monotone") + ", best " + bests};
}

// 5. DE-BP vs BPNN on paired seeds
Outcome debp_vs_bpnn()
{
    const Dataset d = synth_regression(200, 37, 21, 0.05, 7);
    const MlpShape shape{37, hidden_size_rule(37, 21, 0), 21};
    std::size_t wins = 0;
    double gap = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DebpConfig cfg;
        cfg.shape = shape;
        cfg.de.seed = seed;
        cfg.gd.seed = seed;
        const TrainResult plain = train_bpnn(d.features, d.targets, shape, cfg.gd);
        const DebpResult hybrid = train_debp(d.features, d.targets, cfg);
        const double a = mse(forward_batch(plain.net, d.features), d.targets);
        const double b = mse(forward_batch(hybrid.net, d.features), d.targets);
        wins += b <= a;
        gap += (a - b) / 10.0;
    }
    return {wins >= 6, "DE-BP <= BPNN in " + std::to_string(wins) + "/10 pairs, mean MSE gap " + num(gap)};
}

// 6. blob recovery and DPNG-EPMC vs EPMC
Outcome blob_recovery()
{
    const BlobData blobs = synth_blobs(3, 50, 5, 10.0, 7);
    const Eigen::MatrixXd& x = blobs.data.features;
    DpngConfig dp;
    dp.base.clusters = 3;
    dp.base.iterations = 300;
    dp.base.max_evaluations = 4500;
    dp.max_gen = 300;
    std::vector<double> ari(25);
    std::vector<double> fit_dpng(25);
    std::vector<double> fit_epmc(25);
    for (std::size_t r = 0; r < 25; ++r) {
        dp.base.seed = run_seed(6, r);
        const ClusterRunResult a = run_dpng_epmc(x, dp);
        const ClusterRunResult b = run_epmc(x, dp.base);
        ari[r] = adjusted_rand_index(assign(x, a.best.centroids), blobs.labels);
        fit_dpng[r] = a.best.fit;
        fit_epmc[r] = b.best.fit;
    }
    const double m_ari = median(ari);
    const double m_dpng = median(fit_dpng);
    const double m_epmc = median(fit_epmc);
    return {m_ari >= 0.9 && m_dpng <= m_epmc, "median ARI " + num(m_ari) + ", median fitness DPNG-EPMC "
                                                  + num(m_dpng) + " vs EPMC " + num(m_epmc)
                                                  + " (4500 evaluations, 25 runs)"};
}

// 7. reduced DPNG-EPMC equals EPMC
Outcome reduction()
{
    const BlobData blobs = synth_blobs(3, 30, 4, 6.0, 11);
    const Eigen::MatrixXd& x = blobs.data.features;
    std::size_t identical = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        DpngConfig dp;
        dp.base.clusters = 4;
        dp.base.iterations = 60;
        dp.base.seed = seed;
        dp.base.max_evaluations = dp.base.np * 61;
        dp.max_gen = 60;
        dp.inertia = false;
        dp.antenna = false;
        dp.adaptive_ga = false;
        dp.elimination = false;
        dp.random_coefficients = false;
        dp.normalize_direction = false;
        dp.clamp_to_data = false;
        dp.lambda_mix = 1.0;
        const ClusterRunResult a = run_dpng_epmc(x, dp);
        const ClusterRunResult b = run_epmc(x, dp.base);
        bool same = a.history.size() == b.history.size() && a.evaluations == b.evaluations
                    && a.best.centroids == b.best.centroids && a.best.fit == b.best.fit;
        for (std::size_t i = 0; same && i < a.history.size(); ++i) {
            same = a.history[i].best_fit == b.history[i].best_fit && a.history[i].mean_fit == b.history[i].mean_fit
                   && a.history[i].n_elite == b.history[i].n_elite;
        }
        identical += same;
    }
    return {identical == 5, std::to_string(identical) + "/5 seeds bit-identical"};
}

// 8. GAN on a 2-D Gaussian plus loss oracles
Outcome gan_sanity()
{
    Rng rng(42);
    Eigen::MatrixXd x(1000, 2);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, 0) = rng.normal();
        x(i, 1) = rng.normal();
    }
    GanConfig cfg;
    cfg.seed = 1;
    const GanTrainResult trained = train_sitgan(x, cfg);
    Rng gen = Rng::stream(1, "acceptance.gan.sample");
    const Eigen::MatrixXd y = generate(trained.quartet, 5000, gen).features;
    const Eigen::RowVectorXd mu = y.colwise().mean();
    const Eigen::MatrixXd centered = y.rowwise() - mu;
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(y.rows() - 1);
    const double mean_err = mu.cwiseAbs().maxCoeff();
    const double cov_err = (cov - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff();

    Rng lr = Rng::stream(8, "acceptance.gan.loss");
    const Eigen::MatrixXd r = uniform_matrix(3, 4, -1.0, 1.0, lr);
    const Eigen::MatrixXd rt = uniform_matrix(3, 4, -1.0, 1.0, lr);
    const Eigen::MatrixXd hr = uniform_matrix(3, 24, 0.0, 1.0, lr);
    const Eigen::MatrixXd hp = uniform_matrix(3, 24, 0.0, 1.0, lr);
    Eigen::VectorXd yr(3);
    Eigen::VectorXd yf(3);
    yr << 0.9, 0.3, 1.0;
    yf << 0.2, 0.0, 0.7;
    double loss_err = 0.0;
    loss_err = std::max(loss_err, static_cast<double>(std::fabs(reconstruction_loss(r, rt)
                                                                - oracle::reconstruction_loss(r, rt))));
    loss_err = std::max(loss_err,
                        static_cast<double>(std::fabs(supervised_loss(hr, hp) - oracle::supervised_loss(hr, hp))));
    loss_err = std::max(loss_err, static_cast<double>(std::fabs(unsupervised_loss(yr, yf)
                                                                - oracle::unsupervised_loss(yr, yf, kProbClamp))));

    return {mean_err <= 0.15 && cov_err <= 0.25 && loss_err <= 1e-9,
            "mean error " + num(mean_err) + ", covariance error " + num(cov_err) + ", loss oracle error "
                + num(loss_err)};
}

// 9. augmentation report
Outcome augmentation()
{
    const Dataset data = synth_regression(1186, 37, 21, 0.05, 7);
    auto [train_raw, test_raw] = split(data, SplitSpec{0.8, 1.0});
    auto [train, params] = minmax_normalize(train_raw);
    const Dataset test = apply_minmax(test_raw, params);

    GanConfig g;
    g.seed = 1;
    const GanTrainResult gan = train_sitgan(train, g);

    DebpConfig base;
    base.shape = {37, hidden_size_rule(37, 21, 0), 21};
    const std::vector<std::size_t> sizes{0, 100, 948};
    const std::vector<Trainer> models{Trainer::bpnn, Trainer::debp};
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const AugmentReport rep = augmentation_experiment(train, test, gan.quartet, sizes, models, seeds, base);

    bool complete = rep.cells.size() == 18 && rep.means.size() == 6;
    std::size_t k = 0;
    for (std::size_t size : sizes) {
        for (std::uint64_t seed : seeds) {
            for (Trainer m : models) {
                complete = complete && k < rep.cells.size() && rep.cells[k].size == size && rep.cells[k].seed == seed
                           && rep.cells[k].model == m && std::isfinite(rep.cells[k].test_mse);
                ++k;
            }
        }
    }
    std::size_t same = 0;
    for (const AugmentCell& c : rep.cells) {
        if (c.size == 0) {
            same += train_and_score(train, test, c.model, c.seed, base) == c.test_mse;
        }
    }
    std::string table;
    for (const AugmentMean& m : rep.means) {
        table += " " + std::to_string(m.size) + "/" + to_string(m.model) + "=" + num(m.mean_test_mse);
    }
    return {complete && same == 6, std::string(complete ? "report complete" : "report INCOMPLETE") + ", size-0 cells "
                                       + std::to_string(same) + "/6 bit-identical, means" + table};
}

// 10. Garson importance
Outcome garson_checks()
{
    MlpNetwork hand = init_network(MlpShape{2, 1, 1}, 1);
    hand.w1 << 3.0, 1.0;
    hand.w2 << -2.0;
    const Eigen::VectorXd h = garson_importance(hand);
    const bool hand_ok = std::fabs(h(0) - 0.75) <= 1e-12 && std::fabs(h(1) - 0.25) <= 1e-12;

    bool props = true;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng rng = Rng::stream(10, "acceptance.garson", s);
        const MlpShape shape{2 + rng.index(10), 1 + rng.index(8), 1 + rng.index(5)};
        MlpNetwork net = init_network(shape, s);
        const Eigen::VectorXd imp = garson_importance(net);
        props = props && (imp.array() >= 0.0).all() && std::fabs(imp.sum() - 1.0) <= 1e-9;
        const std::vector<long double> ref = oracle::garson(net);
        for (Eigen::Index i = 0; i < imp.size(); ++i) {
            worst = std::max(worst, static_cast<double>(std::fabs(imp(i) - ref[static_cast<std::size_t>(i)])));
        }

        std::vector<Eigen::Index> perm(shape.inputs);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size() - 1; i > 0; --i) {
            std::swap(perm[i], perm[rng.index(i + 1)]);
        }
        MlpNetwork shuffled = net;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            shuffled.w1.col(static_cast<Eigen::Index>(i)) = net.w1.col(perm[i]);
        }
        const Eigen::VectorXd imp2 = garson_importance(shuffled);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            props = props && std::fabs(imp2(static_cast<Eigen::Index>(i)) - imp(perm[i])) <= 1e-12;
        }
    }
    return {hand_ok && props && worst <= 1e-12,
            std::string("hand case ") + (hand_ok ? "ok" : "WRONG") + ", properties " + (props ? "ok" : "VIOLATED")
                + " over 20 networks, oracle error " + num(worst)};
}

// 11. determinism across reruns and worker counts
class WorkerEnv {
public:
    WorkerEnv()
    {
        if (const char* v = std::getenv("ASOPT_WORKERS")) {
            saved_ = v;
        }
    }
    ~WorkerEnv()
    {
        if (saved_) {
            ::setenv("ASOPT_WORKERS", saved_->c_str(), 1);
        } else {
            ::unsetenv("ASOPT_WORKERS");
        }
    }
    WorkerEnv(const WorkerEnv&) = delete;
    WorkerEnv& operator=(const WorkerEnv&) = delete;

    static void set(int n) { ::setenv("ASOPT_WORKERS", std::to_string(n).c_str(), 1); }

private:
    std::optional<std::string> saved_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> csv_contents(const CommandOutput& out)
{
    std::map<std::string, std::string> m;
    for (const auto& f : out.files) {
        if (fs::path(f).extension() == ".csv") {
            m[f] = slurp(out.dir / f);
        }
    }
    return m;
}

json tiny_config(Command c, const fs::path& inputs)
{
    json u;
    u["seed"] = 5;
    u["data"]["synthetic"] = {{"kind", "regression"}, {"n", 60}, {"features", 5}, {"targets", 3}, {"seed", 3}};
    u["gd"] = {{"num_epoch", 40}};
    u["de"] = {{"pop_size", 6}, {"max_gen", 3}};
    u["gan"] = {{"hidden_dim", 6}, {"iterations", 4}, {"ae_epochs", 4}, {"sup_epochs", 4}, {"batch_size", 16}};
    switch (c) {
    case Command::cluster:
        u["data"]["synthetic"] = {{"kind", "blobs"}, {"clusters", 3}, {"per_cluster", 12}, {"dim", 3}};
        u["cluster"] = {{"algo", "both"}};
        u["epmc"] = {{"np", 6}, {"iterations", 15}, {"clusters", 3}, {"runs", 4}};
        u["dpng"] = {{"max_gen", 15}};
        break;
    case Command::generate:
        u["generate"] = {{"n", 40}};
        break;
    case Command::augment:
        u["augment"] = {{"sizes", {0, 12}}, {"seeds", {1, 2}}};
        break;
    case Command::analyze:
        u["analyze"] = {{"predicted", (inputs / "pred.csv").string()},
                        {"observed", (inputs / "obs.csv").string()},
                        {"matrix", (inputs / "matrix.csv").string()},
                        {"labels", (inputs / "labels.csv").string()},
                        {"targets", (inputs / "targets.csv").string()}};
        break;
    default:
        break;
    }
    return merge_config(default_config(), u);
}

void write_analyze_inputs(const fs::path& dir)
{
    fs::create_directories(dir);
    Rng rng = Rng::stream(11, "acceptance.analyze");
    const Eigen::MatrixXd obs = uniform_matrix(20, 3, 0.0, 1.0, rng);
    const Eigen::MatrixXd pred = obs + uniform_matrix(20, 3, -0.1, 0.1, rng);
    const std::vector<std::string> otus{"OTU_1", "OTU_2", "OTU_3"};
    write_matrix_csv(dir / "obs.csv", obs, otus);
    write_matrix_csv(dir / "pred.csv", pred, otus);
    write_matrix_csv(dir / "targets.csv", obs, otus);
    write_matrix_csv(dir / "matrix.csv", uniform_matrix(20, 4, 0.0, 1.0, rng), {"a", "b", "c", "d"});
    Eigen::MatrixXd labels(20, 1);
    for (Eigen::Index i = 0; i < labels.rows(); ++i) {
        labels(i, 0) = static_cast<double>(rng.index(3));
    }
    write_matrix_csv(dir / "labels.csv", labels, {"cluster"});
}

Outcome determinism(const fs::path& scratch)
{
    WorkerEnv env;
    const fs::path root = scratch / "determinism";
    fs::remove_all(root);
    write_analyze_inputs(root / "inputs");
    const std::vector<Command> commands{Command::predict, Command::cluster, Command::generate, Command::augment,
                                        Command::analyze};
    const std::vector<int> workers{1, 3, 1};
    std::size_t files = 0;
    std::vector<std::string> mismatched;
    for (Command c : commands) {
        std::optional<std::map<std::string, std::string>> first;
        for (std::size_t run = 0; run < workers.size(); ++run) {
            WorkerEnv::set(workers[run]);
            json cfg = tiny_config(c, root / "inputs");
            cfg["output"] = (root / (to_string(c) + "_" + std::to_string(run))).string();
            const auto got = csv_contents(run_command(c, cfg));
            if (!first) {
                first = got;
                files += got.size();
            } else if (got != *first) {
                mismatched.push_back(to_string(c) + " run " + std::to_string(run));
            }
        }
    }
    std::string detail = "5 commands x 3 runs (workers 1, 3, 1), " + std::to_string(files) + " CSV files";
    for (const auto& m : mismatched) {
        detail += ", DIFFERS: " + m;
    }
    return {mismatched.empty() && files > 0, detail};
}

struct CriterionInfo {
    const char* name;
    double limit;
};

const std::map<int, CriterionInfo>& criterion_table()
{
    static const std::map<int, CriterionInfo> s{
        {1, {"gradient-oracle", 10.0}},    {2, {"formula-fidelity", 1.0}},   {3, {"fitness-oracle", 5.0}},
        {4, {"de-sphere", 30.0}},          {5, {"debp-vs-bpnn", 300.0}},     {6, {"blob-recovery", 300.0}},
        {7, {"reduction", 30.0}},          {8, {"gan-sanity", 300.0}},       {9, {"augmentation", 900.0}},
        {10, {"garson", 0.0}},             {11, {"determinism", 0.0}},
    };
    return s;
}

} // namespace

std::vector<int> criterion_ids()
{
    std::vector<int> ids;
    for (const auto& [id, s] : criterion_table()) {
        ids.push_back(id);
    }
    return ids;
}

std::string criterion_name(int id)
{
    const auto it = criterion_table().find(id);
    if (it == criterion_table().end()) {
        throw std::invalid_argument("unknown acceptance criterion " + std::to_string(id));
    }
    return it->second.name;
}

CriterionResult run_criterion(int id, const fs::path& scratch)
{
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    r.limit_seconds = criterion_table().at(id).limit;
    fs::create_directories(scratch);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        switch (id) {
        case 1: o = gradient_oracle(); break;
        case 2: o = formula_fidelity(); break;
        case 3: o = fitness_oracle(); break;
        case 4: o = de_sphere(); break;
        case 5: o = debp_vs_bpnn(); break;
        case 6: o = blob_recovery(); break;
        case 7: o = reduction(); break;
        case 8: o = gan_sanity(); break;
        case 9: o = augmentation(); break;
        case 10: o = garson_checks(); break;
        case 11: o = determinism(scratch); break;
        default: break;
        }
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = o.pass;
    r.detail = o.detail;
    if (r.limit_seconds > 0.0 && r.seconds >= r.limit_seconds) {
        r.pass = false;
        r.detail += ", runtime over " + num(r.limit_seconds) + " s";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const fs::path& scratch)
{
    std::vector<CriterionResult> out;
    for (int id : ids.empty() ? criterion_ids() : ids) {
        out.push_back(run_criterion(id, scratch));
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    std::ostringstream s;
    s << (r.pass ? "PASS  " : "FAIL  ") << (r.id < 10 ? "0" : "") << r.id << " " << r.name << "  ";
    s.setf(std::ios::fixed);
    s.precision(2);
    s << r.seconds << " s  " << r.detail;
    return s.str();
}

json results_json(const std::vector<CriterionResult>& results)
{
    json arr = json::array();
    bool all = true;
    for (const auto& r : results) {
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"detail", r.detail},
                       {"seconds", r.seconds},
                       {"limit_seconds", r.limit_seconds}});
        all = all && r.pass;
    }
    return {{"pass", all}, {"criteria", arr}};
}

} // namespace asopt
