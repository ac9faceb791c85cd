#include "asopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "asopt/io.hpp"

namespace asopt {

static void check_same(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) + "x"
                                    + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x"
                                    + std::to_string(b.cols()) + ")");
    }
}

MseTable mse_table(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs)
{
    check_same(pred, obs, "mse_table");
    if (pred.size() == 0) {
        throw std::invalid_argument("mse_table: empty matrices");
    }
    MseTable t;
    t.per_column = (pred - obs).array().square().colwise().mean().transpose();
    t.overall = (pred - obs).array().square().mean();
    return t;
}

LineFit least_squares_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    if (x.size() != y.size() || x.size() == 0) {
        throw std::invalid_argument("least_squares_line: need equal, non-empty vectors");
    }
    const double mx = x.mean();
    const double my = y.mean();
    const double sxx = (x.array() - mx).square().sum();
    const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    return f;
}

LineFit obs_pred_fit(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs)
{
    check_same(pred, obs, "obs_pred_fit");
    const Eigen::VectorXd o = obs.reshaped<Eigen::RowMajor>();
    const Eigen::VectorXd p = pred.reshaped<Eigen::RowMajor>();
    return least_squares_line(o, p);
}

LineFit write_obs_pred(const std::filesystem::path& path, const Eigen::MatrixXd& pred, const Eigen::MatrixXd& obs,
                       const std::vector<std::string>& otu_names)
{
    check_same(pred, obs, "write_obs_pred");
    if (otu_names.size() != static_cast<std::size_t>(obs.cols())) {
        throw std::invalid_argument("write_obs_pred: name count does not match the column count");
    }
    CsvWriter w(path, {"otu", "observed", "predicted"});
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
        for (Eigen::Index j = 0; j < obs.cols(); ++j) {
            w.cell(otu_names[static_cast<std::size_t>(j)]).cell(obs(i, j)).cell(pred(i, j));
            w.end_row();
        }
    }
    return obs_pred_fit(pred, obs);
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a_in, double tol, std::size_t max_sweeps)
{
    if (a_in.rows() != a_in.cols()) {
        throw std::invalid_argument("jacobi_eigen: matrix is not square");
    }
    const Eigen::Index n = a_in.rows();
    Eigen::MatrixXd a = 0.5 * (a_in + a_in.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    SymmetricEigen out;

    auto off_norm = [&]() {
        double s = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = 0; q < n; ++q) {
                if (p != q) {
                    s += a(p, q) * a(p, q);
                }
            }
        }
        return std::sqrt(s);
    };

    while (off_norm() > tol && out.sweeps < max_sweeps) {
        ++out.sweeps;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (off_norm() > tol) {
        throw std::runtime_error("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) + " sweeps");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values(j) = a(src, src);
        out.vectors.col(j) = v.col(src);
    }
    return out;
}

PcaModel pca_fit(const Eigen::MatrixXd& x, std::size_t p)
{
    const auto n = static_cast<std::size_t>(x.rows());
    const auto k = static_cast<std::size_t>(x.cols());
    if (n < 2) {
        throw std::invalid_argument("pca_fit: need at least 2 rows");
    }
    if (p == 0 || p > std::min(n, k)) {
        throw std::invalid_argument("pca_fit: " + std::to_string(p) + " components requested, at most "
                                    + std::to_string(std::min(n, k)) + " available");
    }
    PcaModel m;
    m.mean = x.colwise().mean().transpose();
    const Eigen::MatrixXd c = x.rowwise() - m.mean.transpose();
    const Eigen::MatrixXd cov = (c.transpose() * c) / static_cast<double>(n - 1);
    m.total_variance = cov.trace();
    const SymmetricEigen eig = jacobi_eigen(cov);
    const auto pp = static_cast<Eigen::Index>(p);
    m.eigenvalues = eig.values.head(pp).cwiseMax(0.0);
    m.components = eig.vectors.leftCols(pp).transpose();
    // deterministic sign: largest-magnitude entry positive
    for (Eigen::Index r = 0; r < pp; ++r) {
        Eigen::Index arg = 0;
        m.components.row(r).cwiseAbs().maxCoeff(&arg);
        if (m.components(r, arg) < 0.0) {
            m.components.row(r) *= -1.0;
        }
    }
    return m;
}

Eigen::MatrixXd pca_project(const PcaModel& model, const Eigen::MatrixXd& x)
{
    if (x.cols() != model.mean.size()) {
        throw std::invalid_argument("pca_project: column count does not match the model");
    }
    return (x.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& scores)
{
    if (scores.cols() != model.components.rows()) {
        throw std::invalid_argument("pca_reconstruct: score width does not match the model");
    }
    return (scores * model.components).rowwise() + model.mean.transpose();
}

static std::vector<std::size_t> bin_index(const Eigen::VectorXd& v, std::size_t bins)
{
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    std::vector<std::size_t> out(static_cast<std::size_t>(v.size()));
    const double width = (hi - lo) / static_cast<double>(bins);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        auto b = static_cast<std::size_t>((v(i) - lo) / width);
        out[static_cast<std::size_t>(i)] = std::min(b, bins - 1);
    }
    return out;
}

double mutual_information(const Eigen::VectorXd& x, const Eigen::VectorXd& y, std::size_t bins)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("mutual_information: length mismatch");
    }
    if (x.size() < 2) {
        throw std::invalid_argument("mutual_information: need at least 2 samples");
    }
    if (bins < 2) {
        throw std::invalid_argument("mutual_information: need at least 2 bins");
    }
    if (!x.allFinite() || !y.allFinite()) {
        throw std::invalid_argument("mutual_information: non-finite input");
    }
    if (!(x.maxCoeff() > x.minCoeff()) || !(y.maxCoeff() > y.minCoeff())) {
        return 0.0;
    }
    const std::vector<std::size_t> bx = bin_index(x, bins);
    const std::vector<std::size_t> by = bin_index(y, bins);
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(bins));
    for (std::size_t i = 0; i < bx.size(); ++i) {
        joint(static_cast<Eigen::Index>(bx[i]), static_cast<Eigen::Index>(by[i])) += 1.0;
    }
    joint /= static_cast<double>(x.size());
    const Eigen::VectorXd px = joint.rowwise().sum();
    const Eigen::VectorXd py = joint.colwise().sum().transpose();
    double mi = 0.0;
    for (Eigen::Index i = 0; i < joint.rows(); ++i) {
        for (Eigen::Index j = 0; j < joint.cols(); ++j) {
            const double pij = joint(i, j);
            if (pij > 0.0) {
                mi += pij * std::log(pij / (px(i) * py(j)));
            }
        }
    }
    return mi;
}

Eigen::MatrixXd mutual_information_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::size_t bins)
{
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("mutual_information_matrix: row counts differ");
    }
    Eigen::MatrixXd out(a.cols(), b.cols());
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            out(i, j) = mutual_information(a.col(i), b.col(j), bins);
        }
    }
    return out;
}

CoreCommunity core_community(const std::vector<int>& labels, const Eigen::MatrixXd& targets, std::size_t clusters)
{
    if (labels.size() != static_cast<std::size_t>(targets.rows())) {
        throw std::invalid_argument("core_community: label count does not match the target rows");
    }
    const auto c = static_cast<Eigen::Index>(clusters);
    CoreCommunity out;
    out.mean = Eigen::MatrixXd::Zero(c, targets.cols());
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int l = labels[i];
        if (l < 0 || static_cast<std::size_t>(l) >= clusters) {
            throw std::invalid_argument("core_community: label " + std::to_string(l) + " out of range");
        }
        out.mean.row(l) += targets.row(static_cast<Eigen::Index>(i));
        ++counts[static_cast<std::size_t>(l)];
    }
    out.empty.assign(clusters, false);
    for (std::size_t k = 0; k < clusters; ++k) {
        const auto r = static_cast<Eigen::Index>(k);
        if (counts[k] == 0) {
            out.empty[k] = true;
            out.mean.row(r).setConstant(std::numeric_limits<double>::quiet_NaN());
        } else {
            out.mean.row(r) /= static_cast<double>(counts[k]);
        }
    }
    return out;
}

Eigen::MatrixXd log10_view(const Eigen::MatrixXd& m, double floor)
{
    return m.unaryExpr([floor](double v) { return std::isnan(v) ? v : std::log10(std::max(v, floor)); });
}

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("adjusted_rand_index: label vectors differ in length");
    }
    const auto n = static_cast<double>(a.size());
    if (a.size() < 2) {
        return 1.0;
    }
    std::map<std::pair<int, int>, double> cells;
    std::map<int, double> rows;
    std::map<int, double> cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cells[{a[i], b[i]}] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto c2 = [](double v) { return v * (v - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [k, v] : cells) {
        index += c2(v);
    }
    double sa = 0.0;
    for (const auto& [k, v] : rows) {
        sa += c2(v);
    }
    double sb = 0.0;
    for (const auto& [k, v] : cols) {
        sb += c2(v);
    }
    const double expected = sa * sb / c2(n);
    const double max_index = 0.5 * (sa + sb);
    if (max_index == expected) {
        // both labelings trivial (all one cluster or all singletons)
        return 1.0;
    }
    return (index - expected) / (max_index - expected);
}

} // namespace asopt
