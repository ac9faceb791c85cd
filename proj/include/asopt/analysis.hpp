#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace asopt {

struct MseTable {
    double overall = 0.0;
    Eigen::VectorXd per_column;
};

MseTable mse_table(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least squares y ~ slope * x + intercept. A constant x gives slope 0.
LineFit least_squares_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Fit of predicted ~ observed over all n*N entries.
LineFit obs_pred_fit(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs);

// Writes (otu, observed, predicted), one row per entry, row-major over
// samples. Returns the fit.
LineFit write_obs_pred(const std::filesystem::path& path, const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs,
                       const std::vector<std::string>& otu_names);

struct SymmetricEigen {
    Eigen::VectorXd values;  // descending
    Eigen::MatrixXd vectors; // column j pairs with values(j)
    std::size_t sweeps = 0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is <= tol.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double tol = 1e-10, std::size_t max_sweeps = 100);

struct PcaModel {
    Eigen::VectorXd mean;        // k
    Eigen::MatrixXd components;  // p x k, orthonormal rows
    Eigen::VectorXd eigenvalues; // p, descending, >= 0
    double total_variance = 0.0; // trace of the sample covariance
};

PcaModel pca_fit(const Eigen::MatrixXd& x, std::size_t p);
Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& x);
Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores);

// Plug-in estimate over an equal-width bins x bins joint histogram, natural
// log. Constant x or y gives 0.
double mutual_information(const Eigen::VectorXd& x, const Eigen::VectorXd& y, std::size_t bins = 10);

// out(i, j) = MI(a.col(i), b.col(j)).
Eigen::MatrixXd mutual_information_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                          std::size_t bins = 10);

struct CoreCommunity {
    Eigen::MatrixXd mean;    // clusters x N; NaN rows for empty clusters
    std::vector<bool> empty; // per cluster
};

CoreCommunity core_community(const std::vector<int>& labels, const Eigen::MatrixXd& targets,
                             std::size_t clusters);

// log10(max(v, floor)); NaN stays NaN.
Eigen::MatrixXd log10_view(const Eigen::MatrixXd& m, double floor = 1e-6);

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

} // namespace asopt
