#pragma once

#include <vector>

#include <Eigen/Core>

#include "asopt/de.hpp"
#include "asopt/mlp.hpp"

namespace asopt {

// Parameter vector layout: W1 (row-major), b1, W2 (row-major), b2.
Eigen::VectorXd flatten(const MlpNetwork& net);
MlpNetwork unflatten(const Eigen::VectorXd& v, const MlpShape& shape);

struct DebpConfig {
    DeConfig de;
    GdConfig gd;
    MlpShape shape;
};

struct DebpResult {
    MlpNetwork net;
    std::vector<double> de_history;      // best training MSE per DE generation
    std::vector<double> de_mean_history; // population mean per generation
    std::vector<double> gd_curve;        // training MSE per GD epoch
};

// Plain backprop baseline: the standard random init (seed cfg.seed) trained
// with gradient descent.
TrainResult train_bpnn(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const MlpShape& shape,
                       const GdConfig& cfg);

// DE over flattened parameters (fitness = training MSE, no decay term) picks
// the starting point for gradient descent. Population member 0 is the same
// standard init train_bpnn uses; the rest are independent random inits. With
// de.max_gen == 0 the DE phase is skipped and GD starts from that standard
// init, so the result equals train_bpnn.
DebpResult train_debp(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const DebpConfig& cfg);

} // namespace asopt
