#pragma once

// Reference evaluations used by the tests and the acceptance suite. They do
// not call into the code they check: arithmetic is redone here in long
// double or by enumeration.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "asopt/mlp.hpp"

namespace asopt::oracle {

long double adaptive_f(long double f0, std::size_t max_gen, std::size_t gen);
long double nonlinear_weight(std::size_t t, std::size_t total, long double w_start, long double w_end);
std::size_t elite_count(std::size_t np, std::size_t t, std::size_t total, std::size_t elitnum);
long double accept_prob(std::size_t t);
long double sigmoid_response(long double r, long double a);
// Cosine-sigmoid rate with the branch, degenerate and clamp rules.
long double adaptive_rate(long double f, long double f_avg, long double f_max, long double lo, long double hi,
                          long double a);

// Objective mse + decay * (|W1|^2 + |W2|^2) / 2 in long double.
long double mlp_objective(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          long double decay);

struct FlatGradient {
    std::vector<long double> w1, b1, w2, b2; // row-major for the matrices
};

// Fourth-order central differences of mlp_objective (Richardson over h and
// h/2) for every parameter.
FlatGradient mlp_gradient_fd(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                             long double decay, long double h = 1e-4L);

// l * min over all l^n assignments of sum |x_i - h_a(i)| divided by the
// smallest pairwise centroid distance, both found by enumeration. Returns
// `penalty` when that distance is below `min_sep`.
double cluster_fitness_brute_force(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& data, double penalty,
                                   double min_sep);

// Row-by-row sums for the three GAN losses.
long double reconstruction_loss(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde);
long double supervised_loss(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred);
long double unsupervised_loss(const Eigen::VectorXd& y_real, const Eigen::VectorXd& y_fake, long double clamp);

// Pair-counting adjusted Rand index over all n(n-1)/2 pairs.
long double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

// Garson importance by explicit summation.
std::vector<long double> garson(const MlpNetwork& net);

} // namespace asopt::oracle
