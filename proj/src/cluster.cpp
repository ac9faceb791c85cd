#include "asopt/cluster.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace asopt {

std::vector<int> assign(const Eigen::MatrixXd& data, const Eigen::MatrixXd& centroids)
{
    if (data.cols() != centroids.cols()) {
        throw std::invalid_argument("assign: data has " + std::to_string(data.cols())
                                    + " columns, centroids have " + std::to_string(centroids.cols()));
    }
    std::vector<int> labels(static_cast<std::size_t>(data.rows()), 0);
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (data.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
            }
        }
    }
    return labels;
}

double min_separation(const Eigen::MatrixXd& centroids)
{
    double sep = std::numeric_limits<double>::infinity();
    for (Eigen::Index m = 0; m < centroids.rows(); ++m) {
        for (Eigen::Index n = m + 1; n < centroids.rows(); ++n) {
            sep = std::min(sep, (centroids.row(m) - centroids.row(n)).norm());
        }
    }
    return sep;
}

double cluster_fitness(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& data)
{
    if (centroids.rows() < 2) {
        throw std::invalid_argument("cluster_fitness: need at least 2 centroids");
    }
    if (!centroids.allFinite()) {
        return kDegeneratePenalty;
    }
    const double sep = min_separation(centroids);
    if (!(sep >= kMinSeparation)) {
        return kDegeneratePenalty;
    }
    const std::vector<int> labels = assign(data, centroids);
    double cohesion = 0.0;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        cohesion += (data.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).norm();
    }
    return static_cast<double>(centroids.rows()) * cohesion / sep;
}

ClusterIndividual init_individual(const Eigen::MatrixXd& data, std::size_t l, Rng& rng)
{
    const auto n = static_cast<std::size_t>(data.rows());
    if (n < l) {
        throw std::invalid_argument("init_individual: " + std::to_string(l) + " clusters requested but only "
                                    + std::to_string(n) + " rows");
    }
    // partial Fisher-Yates
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    ClusterIndividual ind;
    ind.centroids.resize(static_cast<Eigen::Index>(l), data.cols());
    for (std::size_t c = 0; c < l; ++c) {
        const std::size_t pick = c + rng.index(n - c);
        std::swap(idx[c], idx[pick]);
        ind.centroids.row(static_cast<Eigen::Index>(c)) = data.row(static_cast<Eigen::Index>(idx[c]));
    }
    ind.fit = cluster_fitness(ind.centroids, data);
    return ind;
}

DataBounds data_bounds(const Eigen::MatrixXd& data)
{
    return {data.colwise().minCoeff().transpose(), data.colwise().maxCoeff().transpose()};
}

} // namespace asopt
