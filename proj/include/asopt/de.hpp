#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "asopt/rng.hpp"

namespace asopt {

struct DeConfig {
    std::size_t pop_size = 20;
    double f0 = 0.9; // base scaling factor
    double cr = 0.4; // crossover probability
    std::size_t max_gen = 20;
    std::uint64_t seed = 0;
    // Optional per-dimension [lo, hi]; donors are clamped into it.
    std::vector<std::pair<double, double>> bounds;

    void validate(std::size_t dim) const;
};

struct DeIndividual {
    Eigen::VectorXd x;
    double fit = 0.0;
};

// phi = exp(1 - Gm / (Gm + 1 - G)), F = F0 * 2^phi. Requires G <= Gm.
double adaptive_f(double f0, std::size_t max_gen, std::size_t gen);

// va = x_i + F * (x_r1 - x_r2) with r1 != r2 != i drawn from rng, clamped to
// bounds when given.
Eigen::VectorXd mutate(const std::vector<DeIndividual>& pop, std::size_t i, double f, Rng& rng,
                       const std::vector<std::pair<double, double>>& bounds = {});

// Same, with explicit partner indices (no distinctness requirement).
Eigen::VectorXd mutate_with(const std::vector<DeIndividual>& pop, std::size_t i, std::size_t r1,
                            std::size_t r2, double f,
                            const std::vector<std::pair<double, double>>& bounds = {});

// u_j = donor_j if rand <= CR or j == j_rand, else target_j. rand is drawn in
// (0, 1] so CR = 0 keeps only the forced gene and CR = 1 takes every gene.
Eigen::VectorXd binomial_cross(const Eigen::VectorXd& target, const Eigen::VectorXd& donor, double cr,
                               Rng& rng);

// Trial wins ties.
const DeIndividual& select_greedy(const DeIndividual& target, const DeIndividual& trial);

using FitnessFn = std::function<double(const Eigen::VectorXd&)>;
using Sampler = std::function<Eigen::VectorXd(Rng&)>;

struct DeResult {
    DeIndividual best;
    std::vector<double> best_history; // entry g = best fitness after generation g (entry 0 = initial)
    std::vector<double> mean_history;
};

// Runs cfg.max_gen generations of mutate -> cross -> select over the whole
// population. Fitness evaluations of a generation run on the worker pool;
// all random draws happen beforehand in index order.
DeResult run_de(const FitnessFn& fitness, const DeConfig& cfg, std::vector<Eigen::VectorXd> init);

// Initial population drawn from `sampler` (cfg.pop_size members).
DeResult run_de(const FitnessFn& fitness, const DeConfig& cfg, const Sampler& sampler);

} // namespace asopt
