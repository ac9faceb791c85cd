#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "asopt/rng.hpp"

namespace asopt {

// Fitness returned when two centroids (nearly) coincide.
inline constexpr double kDegeneratePenalty = 1e12;
inline constexpr double kMinSeparation = 1e-9;

// Beetle-antenna probe positions around a clustering individual.
struct AntennaState {
    Eigen::MatrixXd right; // Hr
    Eigen::MatrixXd left;  // Hl
    double sigma = 0.0;    // step size
    double d = 0.0;        // antenna distance, sigma / s after every decay
};

struct ClusterIndividual {
    Eigen::MatrixXd centroids; // l x k, one centroid per row
    double fit = 0.0;
    std::optional<AntennaState> antenna;
};

// labels[i] = argmin_c |x_i - h_c|, ties to the lowest index.
std::vector<int> assign(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centroids);

// l * sum_i |x_i - h_label(i)| / min_{m != n} |h_m - h_n|.
// Returns kDegeneratePenalty when the smallest centroid separation is below
// kMinSeparation. Empty clusters are allowed.
double cluster_fitness(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& data);

// Smallest pairwise centroid distance.
double min_separation(const Eigen::MatrixXd& centroids);

// Forgy initialization: l distinct data rows sampled without replacement.
ClusterIndividual init_individual(const Eigen::MatrixXd& data, std::size_t l, Rng& rng);

// Per-column min/max of the data, used to bound mutation.
struct DataBounds {
    Eigen::VectorXd min;
    Eigen::VectorXd max;
};
DataBounds data_bounds(const Eigen::MatrixXd& data);

} // namespace asopt
