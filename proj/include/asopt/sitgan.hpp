#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "asopt/dataset.hpp"
#include "asopt/debp.hpp"
#include "asopt/layers.hpp"

namespace asopt {

struct GanConfig {
    std::size_t hidden_dim = 24;
    std::size_t num_layer = 3;
    std::size_t iterations = 100;   // joint-phase epochs
    std::size_t ae_epochs = 100;    // autoencoder warm-up epochs
    std::size_t sup_epochs = 100;   // supervised warm-up epochs
    double lambda = 1.0;            // weight of L_S for embedder/recovery
    double eta = 10.0;              // weight of L_S for the generator
    std::size_t batch_size = 128;
    double learn_rate = 1e-3;       // Adam step size, all four networks
    double beta1 = 0.5;             // Adam first-moment decay
    // Weight of the generator's moment term (mean and standard deviation of
    // recovered rows vs the full training set); 0 leaves eta*L_S +
    // adversarial only.
    double moment_weight = 100.0;
    double correlation_weight = 10.0; // weight of correlation_loss on the same rows
    std::size_t disc_steps = 1;     // discriminator updates per joint step
    double disc_learn_rate = 0.0;   // 0 = learn_rate
    double gen_learn_rate = 3e-4;   // joint-phase generator step; 0 = learn_rate
    // Decay of the running average of generator and recovery weights over
    // joint steps; the returned quartet carries the averages. 0 disables.
    double weight_average = 0.98;
    std::size_t noise_dim = 0;      // generator noise width; 0 = hidden_dim
    std::uint64_t seed = 0;
    std::size_t generative_samples = 1186;

    void validate() const;
};

// Row-wise feedforward realization of the four subnetworks. Data enters in
// min-max scaled form; `ranges` maps it back.
struct GanQuartet {
    LayerStack embedder;      // D -> h
    LayerStack recovery;      // h -> D
    LayerStack generator;     // [context (h), z] -> h
    LayerStack discriminator; // h -> 1
    std::vector<ColumnRange> ranges; // per joint column (features then targets)
    FeatureSchema schema;
    NormState norm_state = NormState::raw;
    std::size_t hidden_dim = 0;
    std::size_t noise_dim = 0;

    std::size_t data_dim() const { return embedder.input_dim(); }
};

GanQuartet make_quartet(std::size_t data_dim, const GanConfig& cfg, Rng& rng);

// Mean over rows of |R - R~|_2.
double reconstruction_loss(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde);
// d/dR~ of reconstruction_loss; rows with zero residual contribute zero.
Eigen::MatrixXd reconstruction_loss_grad(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde);

// Mean over rows of |h_real - h_pred|_2.
double supervised_loss(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred);
// d/dh_pred; the gradient with respect to h_real is its negation.
Eigen::MatrixXd supervised_loss_grad(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred);

// mean_j |sd_fake_j - sd_real_j| + mean_j |mean_fake_j - mean_real_j| with
// sd = sqrt(population variance + 1e-6).
double moment_loss(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake);
// d/dfake of moment_loss.
Eigen::MatrixXd moment_loss_grad(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake);

// Mean over column pairs j < k of |corr_fake(j, k) - corr_real(j, k)|, with
// the same sd as moment_loss. 0 for fewer than two columns.
double correlation_loss(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake);
Eigen::MatrixXd correlation_loss_grad(const Eigen::MatrixXd& real, const Eigen::MatrixXd& fake);

inline constexpr double kProbClamp = 1e-7;

// mean log y_real + mean log(1 - y_fake), probabilities clamped to
// [1e-7, 1 - 1e-7].
double unsupervised_loss(const Eigen::VectorXd& y_real, const Eigen::VectorXd& y_fake);

struct LossRecord {
    std::string phase; // "autoencoder", "supervised", "joint"
    std::size_t step = 0;
    double l_re = 0.0;
    double l_s = 0.0;
    double l_u = 0.0;
};

struct GanTrainResult {
    GanQuartet quartet;
    std::vector<LossRecord> losses; // one record per optimizer step
};

// Three-phase schedule: autoencoder warm-up on L_Re, supervised warm-up on
// L_S (generator only), then per batch: embedder/recovery on lambda*L_S +
// L_Re, discriminator ascent on L_U, generator descent on
// eta*L_S - mean log d(g(0, z)) + moment_weight * moment_loss(X, r(g(0, z)))
// + correlation_weight * correlation_loss(X, r(g(0, z))), X = all training rows.
GanTrainResult train_sitgan(const Dataset& train, const GanConfig& cfg);
GanTrainResult train_sitgan(const Eigen::MatrixXd& joint, const GanConfig& cfg);

// n rows in scaled [0, 1] space: z ~ N(0, I), h = g(0, z), row = clamp(r(h)).
Eigen::MatrixXd generate_normalized(const GanQuartet& q, std::size_t n, Rng& rng);

// Same rows mapped back through the quartet's column ranges into the units
// of the training data, split into features and targets per the schema.
Dataset generate(const GanQuartet& q, std::size_t n, Rng& rng);

enum class Trainer { bpnn, debp };
std::string to_string(Trainer t);
Trainer parse_trainer(const std::string& s);

struct AugmentCell {
    std::size_t size = 0;
    std::uint64_t seed = 0;
    Trainer model = Trainer::bpnn;
    double test_mse = 0.0;
};

struct AugmentMean {
    std::size_t size = 0;
    Trainer model = Trainer::bpnn;
    double mean_test_mse = 0.0;
};

struct AugmentReport {
    std::vector<AugmentCell> cells; // size-major, then seed, then model
    std::vector<AugmentMean> means; // size-major, then model
};

// For each (size, seed, model): merge `size` generated rows into train,
// train the model with that seed, record test MSE. The generated rows for a
// (size, seed) pair come from Rng::stream(seed, "augment.generate", size).
// base.de.seed and base.gd.seed are replaced by the cell seed.
AugmentReport augmentation_experiment(const Dataset& train, const Dataset& test, const GanQuartet& q,
                                      const std::vector<std::size_t>& sizes, const std::vector<Trainer>& models,
                                      const std::vector<std::uint64_t>& seeds, const DebpConfig& base);

// Test MSE of a single model trained on `train` with seed `seed`.
double train_and_score(const Dataset& train, const Dataset& test, Trainer model, std::uint64_t seed,
                       const DebpConfig& base);

} // namespace asopt
