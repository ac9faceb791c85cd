#include "asopt/de.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "asopt/parallel.hpp"

namespace asopt {

void DeConfig::validate(std::size_t dim) const
{
    if (pop_size < 4) {
        throw std::invalid_argument("DE pop_size must be >= 4");
    }
    if (!(f0 > 0.0)) {
        throw std::invalid_argument("DE f0 must be > 0");
    }
    if (!(cr >= 0.0 && cr <= 1.0)) {
        throw std::invalid_argument("DE cr must lie in [0, 1]");
    }
    if (!bounds.empty()) {
        if (bounds.size() != dim) {
            throw std::invalid_argument("DE bounds cover " + std::to_string(bounds.size())
                                        + " dimensions, problem has " + std::to_string(dim));
        }
        for (const auto& [lo, hi] : bounds) {
            if (!(lo <= hi)) {
                throw std::invalid_argument("DE bound with lo > hi");
            }
        }
    }
}

double adaptive_f(double f0, std::size_t max_gen, std::size_t gen)
{
    if (gen > max_gen) {
        throw std::invalid_argument("adaptive_f: generation exceeds max_gen");
    }
    const double gm = static_cast<double>(max_gen);
    const double g = static_cast<double>(gen);
    const double phi = std::exp(1.0 - gm / (gm + 1.0 - g));
    return f0 * std::pow(2.0, phi);
}

namespace {

void clamp_to(Eigen::VectorXd& v, const std::vector<std::pair<double, double>>& bounds)
{
    if (bounds.empty()) {
        return;
    }
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const auto& [lo, hi] = bounds[static_cast<std::size_t>(j)];
        v(j) = std::clamp(v(j), lo, hi);
    }
}

std::string describe(const Eigen::VectorXd& v)
{
    std::ostringstream s;
    s << '[';
    for (Eigen::Index j = 0; j < v.size() && j < 8; ++j) {
        s << (j ? ", " : "") << v(j);
    }
    if (v.size() > 8) {
        s << ", ... (" << v.size() << " entries)";
    }
    s << ']';
    return s.str();
}

double checked(const FitnessFn& fitness, const Eigen::VectorXd& x)
{
    const double f = fitness(x);
    if (!std::isfinite(f)) {
        throw std::runtime_error("non-finite fitness at " + describe(x));
    }
    return f;
}

} // namespace

Eigen::VectorXd mutate_with(const std::vector<DeIndividual>& pop, std::size_t i, std::size_t r1,
                            std::size_t r2, double f, const std::vector<std::pair<double, double>>& bounds)
{
    Eigen::VectorXd va = pop[i].x + f * (pop[r1].x - pop[r2].x);
    clamp_to(va, bounds);
    return va;
}

Eigen::VectorXd mutate(const std::vector<DeIndividual>& pop, std::size_t i, double f, Rng& rng,
                       const std::vector<std::pair<double, double>>& bounds)
{
    if (pop.size() < 3) {
        throw std::invalid_argument("mutate: population needs at least 3 members");
    }
    // r1, r2 without replacement from the population minus i
    std::size_t r1 = rng.index(pop.size() - 1);
    if (r1 >= i) {
        ++r1;
    }
    std::size_t r2 = rng.index(pop.size() - 2);
    const std::size_t lo = std::min(i, r1);
    const std::size_t hi = std::max(i, r1);
    if (r2 >= lo) {
        ++r2;
    }
    if (r2 >= hi) {
        ++r2;
    }
    return mutate_with(pop, i, r1, r2, f, bounds);
}

Eigen::VectorXd binomial_cross(const Eigen::VectorXd& target, const Eigen::VectorXd& donor, double cr, Rng& rng)
{
    if (target.size() != donor.size()) {
        throw std::invalid_argument("binomial_cross: length mismatch");
    }
    Eigen::VectorXd u = target;
    const auto j_rand = static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(target.size())));
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        if (rng.uniform_open_closed() <= cr || j == j_rand) {
            u(j) = donor(j);
        }
    }
    return u;
}

const DeIndividual& select_greedy(const DeIndividual& target, const DeIndividual& trial)
{
    return trial.fit <= target.fit ? trial : target;
}

DeResult run_de(const FitnessFn& fitness, const DeConfig& cfg, std::vector<Eigen::VectorXd> init)
{
    if (init.empty()) {
        throw std::invalid_argument("run_de: empty initial population");
    }
    const auto dim = static_cast<std::size_t>(init.front().size());
    DeConfig effective = cfg;
    effective.pop_size = init.size();
    effective.validate(dim);

    std::vector<DeIndividual> pop(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (static_cast<std::size_t>(init[i].size()) != dim) {
            throw std::invalid_argument("run_de: initial vectors differ in length");
        }
        clamp_to(init[i], cfg.bounds);
        pop[i].x = std::move(init[i]);
    }
    parallel_for(pop.size(), [&](std::size_t i) { pop[i].fit = checked(fitness, pop[i].x); });

    DeResult result;
    auto best_of = [](const std::vector<DeIndividual>& p) {
        return *std::min_element(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.fit < b.fit; });
    };
    auto mean_of = [](const std::vector<DeIndividual>& p) {
        double s = 0.0;
        for (const auto& ind : p) {
            s += ind.fit;
        }
        return s / static_cast<double>(p.size());
    };
    result.best = best_of(pop);
    result.best_history.push_back(result.best.fit);
    result.mean_history.push_back(mean_of(pop));

    Rng rng = Rng::stream(cfg.seed, "de");
    std::vector<DeIndividual> trials(pop.size());
    for (std::size_t gen = 0; gen < cfg.max_gen; ++gen) {
        const double f = adaptive_f(cfg.f0, cfg.max_gen, gen);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const Eigen::VectorXd donor = mutate(pop, i, f, rng, cfg.bounds);
            trials[i].x = binomial_cross(pop[i].x, donor, cfg.cr, rng);
        }
        parallel_for(trials.size(), [&](std::size_t i) { trials[i].fit = checked(fitness, trials[i].x); });
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (&select_greedy(pop[i], trials[i]) == &trials[i]) {
                pop[i] = trials[i];
            }
        }
        const DeIndividual gen_best = best_of(pop);
        if (gen_best.fit <= result.best.fit) {
            result.best = gen_best;
        }
        result.best_history.push_back(result.best.fit);
        result.mean_history.push_back(mean_of(pop));
    }
    return result;
}

DeResult run_de(const FitnessFn& fitness, const DeConfig& cfg, const Sampler& sampler)
{
    Rng rng = Rng::stream(cfg.seed, "de.init");
    std::vector<Eigen::VectorXd> init;
    init.reserve(cfg.pop_size);
    for (std::size_t i = 0; i < cfg.pop_size; ++i) {
        init.push_back(sampler(rng));
    }
    return run_de(fitness, cfg, std::move(init));
}

} // namespace asopt
