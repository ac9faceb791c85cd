#pragma once

#include <functional>
#include <utility>

#include <Eigen/Core>

#include "asopt/cluster.hpp"
#include "asopt/epmc.hpp"
#include "asopt/rng.hpp"

namespace asopt {

struct DpngConfig {
    EpmcConfig base;
    double w_start = 0.9;
    double w_end = 0.4;
    double sigma0 = 5.0;
    double d0 = 5.0;
    double eta_step = 0.8;   // sigma decay per generation
    double s = 1.0;          // d = sigma / s
    double lambda_mix = 0.5; // blend of increment and directional term
    double pc_min = 0.5;
    double pc_max = 0.8;
    double pm_min = 0.005;
    double pm_max = 0.05;
    double a = 9.903438;
    double p_elim = 0.05;
    std::size_t max_gen = 300; // evaluation budget = max_gen * np when base.max_evaluations is 0
    double mutation_scale = 0.1; // Gaussian sd as a fraction of the feature range

    bool inertia = true;
    bool antenna = true;
    bool adaptive_ga = true;
    bool elimination = true;
    // alpha, beta drawn from U[0, 1] per individual per generation; false uses
    // base.alpha and base.beta.
    bool random_coefficients = true;
    bool normalize_direction = false;
    // Candidate and antenna positions are clamped to the per-column data
    // range, the same box mutation uses.
    bool clamp_to_data = true;

    void validate() const;
    std::size_t evaluation_budget() const;
};

// w_end + (w_start - w_end) * sin(pi/2 * sqrt((1 - t/N)^3))
double nonlinear_weight(std::size_t t, std::size_t total, double w_start, double w_end);

// -1, 0 or +1.
double sign_of(double v);

// sigma * I * sgn(f(Hr) - f(Hl)); evaluates both antenna positions.
Eigen::MatrixXd directional_increment(const AntennaState& state, const Eigen::MatrixXd& inc,
                                      const std::function<double(const Eigen::MatrixXd&)>& fitness);

// Same, from already evaluated antenna fitnesses.
Eigen::MatrixXd directional_increment(double sigma, const Eigen::MatrixXd& inc, double fit_right, double fit_left);

double decay_step(double sigma, double eta_step);
// sigma <- eta * sigma, d <- sigma / s
void decay_antenna(AntennaState& state, double eta_step, double s);

// Hr + I*d/2, Hl - I*d/2
AntennaState update_antennae(const AntennaState& state, const Eigen::MatrixXd& inc);

// H + w * I_prev + lambda * I + (1 - lambda) * phi
Eigen::MatrixXd dpng_update(const Eigen::MatrixXd& h_i, const Eigen::MatrixXd& i_prev, const Eigen::MatrixXd& inc,
                            const Eigen::MatrixXd& phi, double w, double lambda_mix);

// 1 / (1 + exp(-a * r))
double sigmoid_response(double r, double a);

// Cosine-sigmoid adaptive rate. Returns hi when f > f_avg or when
// f_max <= f_avg; the ratio is clamped to [-1, 0] and the result to [lo, hi].
double adaptive_rate(double f, double f_avg, double f_max, double lo, double hi, double a);
double adaptive_pc(double f_prime, double f_avg, double f_max, const DpngConfig& cfg);
double adaptive_pm(double f, double f_avg, double f_max, const DpngConfig& cfg);

// With probability pc the pair crosses: each centroid row swaps with
// probability 0.5.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> crossover_individuals(const Eigen::MatrixXd& ha,
                                                                  const Eigen::MatrixXd& hb, double pc, Rng& rng);

// Each entry mutates with probability pm: Gaussian noise with sd
// scale * (max - min) of its column, clamped to the column bounds.
Eigen::MatrixXd mutate_individual(const Eigen::MatrixXd& h, double pm, const DataBounds& bounds, Rng& rng,
                                  double scale = 0.1);

ClusterRunResult run_dpng_epmc(const Eigen::MatrixXd& data, const DpngConfig& cfg);

} // namespace asopt
