#include "asopt/epmc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "asopt/parallel.hpp"
#include "swarm_detail.hpp"

namespace asopt {

void EpmcConfig::validate() const
{
    if (np < 2) {
        throw std::invalid_argument("epmc: np must be at least 2");
    }
    if (clusters < 2) {
        throw std::invalid_argument("epmc: clusters must be at least 2");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0 && alpha + beta <= 1.0 + 1e-12)) {
        throw std::invalid_argument("epmc: need alpha, beta in [0, 1] and alpha + beta <= 1");
    }
    if (np < 2 * radius + 1) {
        throw std::invalid_argument("epmc: np must be at least 2 * radius + 1");
    }
    if (elitnum < 1 || elitnum > np) {
        throw std::invalid_argument("epmc: elitnum must be in [1, np]");
    }
    if (!(accept_scale >= 0.0) || !std::isfinite(accept_scale)) {
        throw std::invalid_argument("epmc: accept_scale must be >= 0");
    }
}

std::vector<double> rank_weights(std::size_t np)
{
    if (np == 0) {
        throw std::invalid_argument("rank_weights: np must be positive");
    }
    std::vector<double> w(np);
    const auto n = static_cast<double>(np);
    for (std::size_t i = 0; i < np; ++i) {
        w[i] = (n - static_cast<double>(i)) / n;
    }
    return w;
}

std::vector<double> learn_probs(const std::vector<double>& weights)
{
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) {
            throw std::invalid_argument("learn_probs: weights must be positive");
        }
        sum += w;
    }
    std::vector<double> p(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        p[i] = weights[i] / sum;
    }
    return p;
}

std::size_t roulette_at(const std::vector<double>& probs, double p_rand)
{
    if (probs.empty()) {
        throw std::invalid_argument("roulette: empty distribution");
    }
    double cum = 0.0;
    for (std::size_t m = 0; m < probs.size(); ++m) {
        cum += probs[m];
        if (p_rand <= cum && probs[m] > 0.0) {
            return m;
        }
    }
    // rounding left the total slightly below p_rand
    for (std::size_t m = probs.size(); m-- > 0;) {
        if (probs[m] > 0.0) {
            return m;
        }
    }
    return probs.size() - 1;
}

std::size_t roulette(const std::vector<double>& probs, Rng& rng)
{
    return roulette_at(probs, rng.uniform());
}

void update_feel(FeelMatrix& feel, std::size_t i, std::size_t j, bool improved)
{
    int& v = feel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    v = improved ? v + 1 : std::max(1, v - 1);
}

NeighborProbs neighbor_probs(const FeelMatrix& feel, std::size_t i, std::size_t radius)
{
    const auto np = static_cast<std::size_t>(feel.rows());
    NeighborProbs out;
    const std::size_t lo = i >= radius ? i - radius : 0;
    const std::size_t hi = std::min(np - 1, i + radius);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) {
            continue;
        }
        out.indices.push_back(j);
        const double f = feel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        out.probs.push_back(f);
        sum += f;
    }
    for (double& p : out.probs) {
        p /= sum;
    }
    return out;
}

std::size_t elite_count(std::size_t np, std::size_t t, std::size_t total, std::size_t elitnum)
{
    if (total == 0) {
        return std::min(np, elitnum);
    }
    if (t > total) {
        throw std::invalid_argument("elite_count: t exceeds total iterations");
    }
    const std::size_t grown = np * t / total;
    return std::min(np, std::max(grown, elitnum));
}

static void check_shapes(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x"
                                    + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x"
                                    + std::to_string(b.cols()) + ")");
    }
}

Eigen::MatrixXd increment(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& h_m, const Eigen::MatrixXd& h_e,
                          double alpha, double beta)
{
    check_shapes(h_i, h_m, "increment");
    check_shapes(h_i, h_e, "increment");
    return alpha * (h_m - h_i) + beta * (h_e - h_i);
}

Eigen::MatrixXd epmc_update(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& h_m, const Eigen::MatrixXd& h_e,
                            double alpha, double beta)
{
    return h_i + increment(h_i, h_m, h_e, alpha, beta);
}

double accept_prob(std::size_t t, std::size_t total, double scale)
{
    if (scale > 0.0 && total > 0) {
        return std::exp(-scale * static_cast<double>(t) / static_cast<double>(total));
    }
    return std::exp(-static_cast<double>(t));
}

bool retain_new(double fit_old, double fit_new, double p_accept, Rng& rng)
{
    if (fit_new <= fit_old) {
        return true;
    }
    return rng.uniform_open_closed() <= p_accept;
}

ClusterRunResult run_epmc(const Eigen::MatrixXd& data, const EpmcConfig& cfg)
{
    cfg.validate();
    const std::size_t np = cfg.np;
    Rng init_rng = Rng::stream(cfg.seed, "epmc.init");
    Rng step_rng = Rng::stream(cfg.seed, "epmc.step");

    Population pop;
    pop.elitnum = cfg.elitnum;
    pop.total = cfg.iterations;
    for (std::size_t i = 0; i < np; ++i) {
        pop.members.push_back(init_individual(data, cfg.clusters, init_rng));
    }
    pop.feel = FeelMatrix::Ones(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    detail::sort_population<int>(pop.members, pop.feel, nullptr);

    ClusterRunResult result;
    result.evaluations = np;
    result.best = pop.members.front();
    result.history.push_back({0, result.best.fit, detail::mean_fit(pop.members),
                              elite_count(np, 0, cfg.iterations, cfg.elitnum)});

    std::vector<Eigen::MatrixXd> cand(np);
    std::vector<double> cand_fit(np);
    std::vector<detail::Targets> targets(np);

    for (std::size_t t = 0; t < cfg.iterations; ++t) {
        if (cfg.max_evaluations > 0 && result.evaluations >= cfg.max_evaluations) {
            break;
        }
        pop.t = t;
        const std::size_t n_elite = elite_count(np, t, cfg.iterations, cfg.elitnum);
        const std::vector<double> pool = detail::pool_probs(np, n_elite, cfg.elite_pool);

        for (std::size_t i = 0; i < np; ++i) {
            targets[i] = detail::pick_targets(pop.feel, i, pool, cfg.radius, step_rng);
        }
        parallel_for(np, [&](std::size_t i) {
            cand[i] = epmc_update(pop.members[i].centroids, pop.members[targets[i].m].centroids,
                                  pop.members[targets[i].e].centroids, cfg.alpha, cfg.beta);
            cand_fit[i] = cluster_fitness(cand[i], data);
        });
        result.evaluations += np;

        const double p_accept = accept_prob(t, cfg.iterations, cfg.accept_scale);
        for (std::size_t i = 0; i < np; ++i) {
            ClusterIndividual& ind = pop.members[i];
            const double old_fit = ind.fit;
            if (retain_new(old_fit, cand_fit[i], p_accept, step_rng)) {
                ind.centroids = std::move(cand[i]);
                ind.fit = cand_fit[i];
            }
            update_feel(pop.feel, i, targets[i].e, ind.fit < old_fit);
        }

        detail::sort_population<int>(pop.members, pop.feel, nullptr);
        if (pop.members.front().fit < result.best.fit) {
            result.best = pop.members.front();
        }
        result.history.push_back({t + 1, result.best.fit, detail::mean_fit(pop.members),
                                  elite_count(np, t + 1, cfg.iterations, cfg.elitnum)});
        result.iterations_run = t + 1;
    }
    return result;
}

} // namespace asopt
