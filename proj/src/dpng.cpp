#include "asopt/dpng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

#include "asopt/parallel.hpp"
#include "swarm_detail.hpp"

namespace asopt {

void DpngConfig::validate() const
{
    base.validate();
    if (!(w_end >= 0.0 && w_end <= w_start)) {
        throw std::invalid_argument("dpng: need 0 <= w_end <= w_start");
    }
    if (!(eta_step > 0.0 && eta_step < 1.0)) {
        throw std::invalid_argument("dpng: eta_step must be in (0, 1)");
    }
    if (!(lambda_mix >= 0.0 && lambda_mix <= 1.0)) {
        throw std::invalid_argument("dpng: lambda_mix must be in [0, 1]");
    }
    if (!(sigma0 >= 0.0) || !(d0 >= 0.0) || !(s > 0.0)) {
        throw std::invalid_argument("dpng: need sigma0 >= 0, d0 >= 0, s > 0");
    }
    if (!(pc_min >= 0.0 && pc_min < pc_max && pc_max <= 1.0)) {
        throw std::invalid_argument("dpng: need 0 <= pc_min < pc_max <= 1");
    }
    if (!(pm_min >= 0.0 && pm_min < pm_max && pm_max <= 1.0)) {
        throw std::invalid_argument("dpng: need 0 <= pm_min < pm_max <= 1");
    }
    if (!(p_elim >= 0.0 && p_elim <= 1.0)) {
        throw std::invalid_argument("dpng: p_elim must be in [0, 1]");
    }
    if (!(mutation_scale >= 0.0)) {
        throw std::invalid_argument("dpng: mutation_scale must be >= 0");
    }
}

std::size_t DpngConfig::evaluation_budget() const
{
    return base.max_evaluations > 0 ? base.max_evaluations : max_gen * base.np;
}

double nonlinear_weight(std::size_t t, std::size_t total, double w_start, double w_end)
{
    if (total == 0) {
        return w_start;
    }
    if (t > total) {
        throw std::invalid_argument("nonlinear_weight: t exceeds total iterations");
    }
    const double frac = 1.0 - static_cast<double>(t) / static_cast<double>(total);
    return w_end + (w_start - w_end) * std::sin(std::numbers::pi / 2.0 * std::sqrt(frac * frac * frac));
}

double sign_of(double v)
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

Eigen::MatrixXd directional_increment(double sigma, const Eigen::MatrixXd& inc, double fit_right, double fit_left)
{
    const double sg = sign_of(fit_right - fit_left);
    if (sg == 0.0) {
        return Eigen::MatrixXd::Zero(inc.rows(), inc.cols());
    }
    return (sigma * sg) * inc;
}

Eigen::MatrixXd directional_increment(const AntennaState& state, const Eigen::MatrixXd& inc,
                                      const std::function<double(const Eigen::MatrixXd&)>& fitness)
{
    return directional_increment(state.sigma, inc, fitness(state.right), fitness(state.left));
}

double decay_step(double sigma, double eta_step)
{
    if (!(eta_step > 0.0 && eta_step < 1.0)) {
        throw std::invalid_argument("decay_step: eta_step must be in (0, 1)");
    }
    return eta_step * sigma;
}

void decay_antenna(AntennaState& state, double eta_step, double s)
{
    state.sigma = decay_step(state.sigma, eta_step);
    state.d = state.sigma / s;
}

AntennaState update_antennae(const AntennaState& state, const Eigen::MatrixXd& inc)
{
    if (state.right.rows() != inc.rows() || state.right.cols() != inc.cols() || state.left.rows() != inc.rows()
        || state.left.cols() != inc.cols()) {
        throw std::invalid_argument("update_antennae: shape mismatch");
    }
    AntennaState next = state;
    next.right = state.right + inc * (state.d / 2.0);
    next.left = state.left - inc * (state.d / 2.0);
    return next;
}

Eigen::MatrixXd dpng_update(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& i_prev, const Eigen::MatrixXd& inc,
                            const Eigen::MatrixXd& phi, double w, double lambda_mix)
{
    for (const Eigen::MatrixXd* m : {&i_prev, &inc, &phi}) {
        if (m->rows() != h_i.rows() || m->cols() != h_i.cols()) {
            throw std::invalid_argument("dpng_update: shape mismatch");
        }
    }
    return h_i + w * i_prev + lambda_mix * inc + (1.0 - lambda_mix) * phi;
}

double sigmoid_response(double r, double a)
{
    const double z = -a * r;
    if (z > 700.0) {
        return 0.0;
    }
    return 1.0 / (1.0 + std::exp(z));
}

double adaptive_rate(double f, double f_avg, double f_max, double lo, double hi, double a)
{
    if (f > f_avg || !(f_max > f_avg)) {
        return hi;
    }
    const double r = std::clamp((f - f_avg) / (f_max - f_avg), -1.0, 0.0);
    const double v = (hi - lo) * std::cos(r * std::numbers::pi) / (1.0 + std::exp(a * 2.0 * r)) + lo;
    return std::clamp(v, lo, hi);
}

double adaptive_pc(double f_prime, double f_avg, double f_max, const DpngConfig& cfg)
{
    return adaptive_rate(f_prime, f_avg, f_max, cfg.pc_min, cfg.pc_max, cfg.a);
}

double adaptive_pm(double f, double f_avg, double f_max, const DpngConfig& cfg)
{
    return adaptive_rate(f, f_avg, f_max, cfg.pm_min, cfg.pm_max, cfg.a);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> crossover_individuals(const Eigen::MatrixXd& ha,
                                                                  const Eigen::MatrixXd& hb, double pc, Rng& rng)
{
    if (ha.rows() != hb.rows() || ha.cols() != hb.cols()) {
        throw std::invalid_argument("crossover_individuals: shape mismatch");
    }
    std::pair<Eigen::MatrixXd, Eigen::MatrixXd> out{ha, hb};
    if (!(rng.uniform() < pc)) {
        return out;
    }
    for (Eigen::Index r = 0; r < ha.rows(); ++r) {
        if (rng.uniform() < 0.5) {
            out.first.row(r) = hb.row(r);
            out.second.row(r) = ha.row(r);
        }
    }
    return out;
}

Eigen::MatrixXd mutate_individual(const Eigen::MatrixXd& h, double pm, const DataBounds& bounds, Rng& rng,
                                  double scale)
{
    if (bounds.min.size() != h.cols() || bounds.max.size() != h.cols()) {
        throw std::invalid_argument("mutate_individual: bounds do not match the centroid dimension");
    }
    Eigen::MatrixXd out = h;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            if (rng.uniform() < pm) {
                const double range = bounds.max(c) - bounds.min(c);
                const double v = h(r, c) + rng.normal() * scale * range;
                out(r, c) = std::clamp(v, bounds.min(c), bounds.max(c));
            }
        }
    }
    return out;
}

namespace {

struct Agent {
    Eigen::MatrixXd i_prev;
};

} // namespace

namespace {

void clamp_rows(Eigen::MatrixXd& h, const DataBounds& bounds)
{
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            h(r, c) = std::clamp(h(r, c), bounds.min(c), bounds.max(c));
        }
    }
}

} // namespace

ClusterRunResult run_dpng_epmc(const Eigen::MatrixXd& data, const DpngConfig& cfg)
{
    cfg.validate();
    const EpmcConfig& base = cfg.base;
    const std::size_t np = base.np;
    const std::size_t budget = cfg.evaluation_budget();
    const bool antenna_on = cfg.antenna && cfg.sigma0 > 0.0;

    // init/step streams are shared with run_epmc; the extra operators draw
    // from their own streams.
    Rng init_rng = Rng::stream(base.seed, "epmc.init");
    Rng step_rng = Rng::stream(base.seed, "epmc.step");
    Rng coef_rng = Rng::stream(base.seed, "dpng.coef");
    Rng ga_rng = Rng::stream(base.seed, "dpng.ga");
    Rng elim_rng = Rng::stream(base.seed, "dpng.elim");
    const DataBounds bounds = data_bounds(data);

    std::vector<ClusterIndividual> members;
    std::vector<Agent> agents(np);
    for (std::size_t i = 0; i < np; ++i) {
        members.push_back(init_individual(data, base.clusters, init_rng));
        agents[i].i_prev = Eigen::MatrixXd::Zero(members[i].centroids.rows(), members[i].centroids.cols());
    }
    FeelMatrix feel = FeelMatrix::Ones(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    detail::sort_population(members, feel, &agents);

    double sigma = cfg.sigma0;
    double d = cfg.sigma0 / cfg.s;

    ClusterRunResult result;
    result.evaluations = np;
    result.best = members.front();
    result.best.antenna.reset();
    {
        ClusterHistoryRow row{0, result.best.fit, detail::mean_fit(members),
                              elite_count(np, 0, base.iterations, base.elitnum)};
        row.w = cfg.inertia ? nonlinear_weight(0, base.iterations, cfg.w_start, cfg.w_end) : 0.0;
        row.sigma = antenna_on ? sigma : 0.0;
        result.history.push_back(row);
    }

    std::vector<detail::Targets> targets(np);
    std::vector<Eigen::MatrixXd> inc(np);
    std::vector<Eigen::MatrixXd> dir(np);
    std::vector<Eigen::MatrixXd> cand(np);
    std::vector<double> cand_fit(np);
    std::vector<double> fit_r(np);
    std::vector<double> fit_l(np);

    for (std::size_t t = 0; t < base.iterations; ++t) {
        if (result.evaluations >= budget) {
            break;
        }
        const std::size_t n_elite = elite_count(np, t, base.iterations, base.elitnum);
        const std::vector<double> pool = detail::pool_probs(np, n_elite, base.elite_pool);
        const double w = cfg.inertia ? nonlinear_weight(t, base.iterations, cfg.w_start, cfg.w_end) : 0.0;

        for (std::size_t i = 0; i < np; ++i) {
            targets[i] = detail::pick_targets(feel, i, pool, base.radius, step_rng);
            double alpha = base.alpha;
            double beta = base.beta;
            if (cfg.random_coefficients) {
                alpha = coef_rng.uniform();
                beta = coef_rng.uniform();
            }
            inc[i] = increment(members[i].centroids, members[targets[i].m].centroids,
                               members[targets[i].e].centroids, alpha, beta);
        }

        // antenna probes
        if (antenna_on) {
            for (std::size_t i = 0; i < np; ++i) {
                dir[i] = inc[i];
                if (cfg.normalize_direction) {
                    const double n = dir[i].norm();
                    if (n > 0.0) {
                        dir[i] /= n;
                    }
                }
                if (!members[i].antenna) {
                    AntennaState st;
                    st.right = members[i].centroids + dir[i] * (cfg.d0 / 2.0);
                    st.left = members[i].centroids - dir[i] * (cfg.d0 / 2.0);
                    if (cfg.clamp_to_data) {
                        clamp_rows(st.right, bounds);
                        clamp_rows(st.left, bounds);
                    }
                    members[i].antenna = std::move(st);
                }
                members[i].antenna->sigma = sigma;
                members[i].antenna->d = d;
            }
            parallel_for(np, [&](std::size_t i) {
                fit_r[i] = cluster_fitness(members[i].antenna->right, data);
                fit_l[i] = cluster_fitness(members[i].antenna->left, data);
            });
            result.evaluations += 2 * np;
        }

        parallel_for(np, [&](std::size_t i) {
            const Eigen::MatrixXd& h = members[i].centroids;
            Eigen::MatrixXd phi = antenna_on ? directional_increment(sigma, dir[i], fit_r[i], fit_l[i])
                                             : Eigen::MatrixXd::Zero(h.rows(), h.cols());
            cand[i] = dpng_update(h, agents[i].i_prev, inc[i], phi, w, cfg.lambda_mix);
            if (antenna_on) {
                *members[i].antenna = update_antennae(*members[i].antenna, dir[i]);
            }
            if (cfg.clamp_to_data) {
                clamp_rows(cand[i], bounds);
                if (antenna_on) {
                    clamp_rows(members[i].antenna->right, bounds);
                    clamp_rows(members[i].antenna->left, bounds);
                }
            }
            cand_fit[i] = cluster_fitness(cand[i], data);
        });
        result.evaluations += np;

        double mean_pc = 0.0;
        double mean_pm = 0.0;
        if (cfg.adaptive_ga) {
            auto stats = [&]() {
                double avg = 0.0;
                double mx = -std::numeric_limits<double>::infinity();
                for (double f : cand_fit) {
                    avg += f;
                    mx = std::max(mx, f);
                }
                return std::pair<double, double>{avg / static_cast<double>(np), mx};
            };

            // crossover over roulette-paired candidates (rank by candidate fitness)
            auto [f_avg, f_max] = stats();
            std::vector<std::size_t> order(np);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return cand_fit[a] < cand_fit[b]; });
            const std::vector<double> rank_p = learn_probs(rank_weights(np));
            std::vector<char> dirty(np, 0);
            const std::size_t pairs = np / 2;
            for (std::size_t p = 0; p < pairs; ++p) {
                const std::size_t a = order[roulette(rank_p, ga_rng)];
                std::size_t b = order[roulette(rank_p, ga_rng)];
                for (int tries = 0; b == a && tries < 8; ++tries) {
                    b = order[roulette(rank_p, ga_rng)];
                }
                if (b == a) {
                    b = order[(std::find(order.begin(), order.end(), a) - order.begin() + 1) % np];
                }
                const double pc = adaptive_pc(std::min(cand_fit[a], cand_fit[b]), f_avg, f_max, cfg);
                mean_pc += pc;
                auto crossed = crossover_individuals(cand[a], cand[b], pc, ga_rng);
                if (crossed.first != cand[a]) {
                    cand[a] = std::move(crossed.first);
                    cand[b] = std::move(crossed.second);
                    dirty[a] = dirty[b] = 1;
                }
            }
            if (pairs > 0) {
                mean_pc /= static_cast<double>(pairs);
            }
            std::size_t dirty_count = 0;
            for (char c : dirty) {
                dirty_count += static_cast<std::size_t>(c);
            }
            parallel_for(np, [&](std::size_t i) {
                if (dirty[i]) {
                    cand_fit[i] = cluster_fitness(cand[i], data);
                }
            });
            result.evaluations += dirty_count;

            std::tie(f_avg, f_max) = stats();
            std::fill(dirty.begin(), dirty.end(), 0);
            dirty_count = 0;
            for (std::size_t i = 0; i < np; ++i) {
                const double pm = adaptive_pm(cand_fit[i], f_avg, f_max, cfg);
                mean_pm += pm;
                Eigen::MatrixXd m = mutate_individual(cand[i], pm, bounds, ga_rng, cfg.mutation_scale);
                if (m != cand[i]) {
                    cand[i] = std::move(m);
                    dirty[i] = 1;
                    ++dirty_count;
                }
            }
            mean_pm /= static_cast<double>(np);
            parallel_for(np, [&](std::size_t i) {
                if (dirty[i]) {
                    cand_fit[i] = cluster_fitness(cand[i], data);
                }
            });
            result.evaluations += dirty_count;
        }

        const double p_accept = accept_prob(t, base.iterations, base.accept_scale);
        for (std::size_t i = 0; i < np; ++i) {
            ClusterIndividual& ind = members[i];
            const double old_fit = ind.fit;
            if (retain_new(old_fit, cand_fit[i], p_accept, step_rng)) {
                ind.centroids = std::move(cand[i]);
                ind.fit = cand_fit[i];
                agents[i].i_prev = std::move(inc[i]);
            } else {
                agents[i].i_prev.setZero();
            }
            update_feel(feel, i, targets[i].e, ind.fit < old_fit);
        }

        if (cfg.elimination && cfg.p_elim > 0.0 && elim_rng.uniform() < cfg.p_elim) {
            std::size_t worst = 0;
            for (std::size_t i = 1; i < np; ++i) {
                if (members[i].fit >= members[worst].fit) {
                    worst = i;
                }
            }
            members[worst] = init_individual(data, base.clusters, elim_rng);
            agents[worst].i_prev.setZero();
            feel.row(static_cast<Eigen::Index>(worst)).setOnes();
            feel.col(static_cast<Eigen::Index>(worst)).setOnes();
            result.evaluations += 1;
        }

        if (antenna_on) {
            sigma = decay_step(sigma, cfg.eta_step);
            d = sigma / cfg.s;
            for (auto& m : members) {
                if (m.antenna) {
                    m.antenna->sigma = sigma;
                    m.antenna->d = d;
                }
            }
        }

        detail::sort_population(members, feel, &agents);
        if (members.front().fit < result.best.fit) {
            result.best = members.front();
            result.best.antenna.reset();
        }
        ClusterHistoryRow row{t + 1, result.best.fit, detail::mean_fit(members),
                              elite_count(np, t + 1, base.iterations, base.elitnum)};
        row.w = w;
        row.sigma = antenna_on ? sigma : 0.0;
        row.mean_pc = mean_pc;
        row.mean_pm = mean_pm;
        result.history.push_back(row);
        result.iterations_run = t + 1;
    }
    return result;
}

} // namespace asopt
