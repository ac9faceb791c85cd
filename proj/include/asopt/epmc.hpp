#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "asopt/cluster.hpp"
#include "asopt/rng.hpp"

namespace asopt {

struct EpmcConfig {
    std::size_t np = 15;         // population size
    std::size_t elitnum = 2;     // initial elite count
    std::size_t iterations = 100; // T
    std::size_t clusters = 10;   // l
    std::size_t runs = 25;
    double alpha = 0.8;
    double beta = 0.2;
    std::size_t radius = 2;      // neighborhood half-width n
    // 0 keeps the literal e^(-t); c > 0 uses e^(-c * t / T).
    double accept_scale = 0.0;
    // Population-wide learning targets are drawn from the elite set only;
    // false draws from the whole population.
    bool elite_pool = true;
    // Cap on fitness evaluations (0 = none); checked before each iteration.
    std::size_t max_evaluations = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

using FeelMatrix = Eigen::MatrixXi;

// phi_i = (NP - i + 1) / NP for ranks i = 1..NP (index 0 is the best).
std::vector<double> rank_weights(std::size_t np);

// P_i = phi_i / sum(phi).
std::vector<double> learn_probs(const std::vector<double>& weights);

// Cumulative-sum selection: the first index m with P_1 + ... + P_m >= p_rand.
std::size_t roulette_at(const std::vector<double>& probs, double p_rand);
std::size_t roulette(const std::vector<double>& probs, Rng& rng);

// feel(i, j) += 1 when the learner improved, -= 1 otherwise; floored at 1.
void update_feel(FeelMatrix& feel, std::size_t i, std::size_t j, bool improved);

struct NeighborProbs {
    std::vector<std::size_t> indices; // window [i - n, i + n] clamped, self excluded
    std::vector<double> probs;
};

NeighborProbs neighbor_probs(const FeelMatrix& feel, std::size_t i, std::size_t radius);

// N_e = max(floor(NP * t / T), elitnum).
std::size_t elite_count(std::size_t np, std::size_t t, std::size_t total, std::size_t elitnum);

// alpha * (H_m - H_i) + beta * (H_e - H_i)
Eigen::MatrixXd increment(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& h_m, const Eigen::MatrixXd& h_e,
                          double alpha, double beta);

// H_i + increment(...)
Eigen::MatrixXd epmc_update(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& h_m, const Eigen::MatrixXd& h_e,
                            double alpha, double beta);

// e^(-t), or e^(-scale * t / total) when scale > 0.
double accept_prob(std::size_t t, std::size_t total = 0, double scale = 0.0);

// True keeps the new position: always when fit_new <= fit_old, otherwise when
// a uniform draw is <= p_accept. Draws only in the worsening case.
bool retain_new(double fit_old, double fit_new, double p_accept, Rng& rng);

struct Population {
    std::vector<ClusterIndividual> members; // ascending fitness
    FeelMatrix feel;
    std::size_t elitnum = 0;
    std::size_t t = 0;
    std::size_t total = 0;
};

struct ClusterHistoryRow {
    std::size_t iteration = 0;
    double best_fit = 0.0; // best so far
    double mean_fit = 0.0; // current population mean
    std::size_t n_elite = 0;
    double w = 0.0;
    double sigma = 0.0;
    double mean_pc = 0.0;
    double mean_pm = 0.0;
};

struct ClusterRunResult {
    ClusterIndividual best;
    std::vector<ClusterHistoryRow> history; // row 0 = initial population
    std::size_t evaluations = 0;
    std::size_t iterations_run = 0;
};

ClusterRunResult run_epmc(const Eigen::MatrixXd& data, const EpmcConfig& cfg);

} // namespace asopt
