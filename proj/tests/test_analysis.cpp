#include "doctest.h"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "asopt/analysis.hpp"
#include "asopt/rng.hpp"
#include "asopt/verify/oracles.hpp"

using namespace asopt;

namespace {

Eigen::MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c, Rng& rng)
{
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = rng.normal();
        }
    }
    return m;
}

} // namespace

TEST_CASE("mse_table")
{
    Eigen::MatrixXd obs(2, 2);
    obs << 0, 0, 0, 0;
    Eigen::MatrixXd pred(2, 2);
    pred << 1, 2, 1, 0;
    const MseTable t = mse_table(pred, obs);
    CHECK(t.per_column(0) == doctest::Approx(1.0));
    CHECK(t.per_column(1) == doctest::Approx(2.0));
    CHECK(t.overall == doctest::Approx(t.per_column.mean()));
}

TEST_CASE("obs_pred_fit recovers a line")
{
    Rng rng(4);
    const Eigen::MatrixXd obs = normal_matrix(10, 3, rng);
    const Eigen::MatrixXd pred = obs.array() + 0.25;
    const LineFit fit = obs_pred_fit(pred, obs);
    CHECK(fit.slope == doctest::Approx(1.0));
    CHECK(fit.intercept == doctest::Approx(0.25));
    const LineFit flat = least_squares_line(Eigen::VectorXd::Constant(5, 2.0), Eigen::VectorXd::LinSpaced(5, 0, 1));
    CHECK(flat.slope == 0.0);
}

TEST_CASE("jacobi_eigen agrees with Eigen")
{
    Rng rng(8);
    const Eigen::MatrixXd b = normal_matrix(6, 6, rng);
    const Eigen::MatrixXd a = b.transpose() * b;
    const SymmetricEigen mine = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    const Eigen::VectorXd expected = ref.eigenvalues().reverse();
    CHECK((mine.values - expected).cwiseAbs().maxCoeff() < 1e-8);
    for (Eigen::Index j = 0; j < 6; ++j) {
        const Eigen::VectorXd v = mine.vectors.col(j);
        CHECK((a * v - mine.values(j) * v).norm() < 1e-7);
    }
}

TEST_CASE("pca")
{
    Rng rng(9);
    SUBCASE("points on a line")
    {
        Eigen::MatrixXd x(50, 3);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const double t = rng.normal();
            x.row(i) << t, 2 * t, -t;
        }
        const PcaModel m = pca_fit(x, 2);
        CHECK(m.eigenvalues(0) / m.total_variance > 0.999);
    }
    SUBCASE("properties")
    {
        Eigen::MatrixXd x = normal_matrix(40, 4, rng);
        x.col(1) *= 3.0;
        x.col(2) += 0.5 * x.col(0);
        const PcaModel m = pca_fit(x, 4);
        const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
        const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
        CHECK(m.total_variance == doctest::Approx(cov.trace()));
        CHECK(m.eigenvalues.sum() == doctest::Approx(cov.trace()));
        for (Eigen::Index j = 1; j < m.eigenvalues.size(); ++j) {
            CHECK(m.eigenvalues(j - 1) >= m.eigenvalues(j));
        }
        CHECK((m.components * m.components.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-9);
        const Eigen::MatrixXd at_mean = pca_project(m, m.mean.transpose());
        CHECK(at_mean.cwiseAbs().maxCoeff() < 1e-9);
        const Eigen::MatrixXd back = pca_reconstruct(m, pca_project(m, x));
        CHECK((back - x).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("mutual information")
{
    Rng rng(10);
    const std::size_t n = 2000;
    Eigen::VectorXd x(n);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x(static_cast<Eigen::Index>(i)) = rng.uniform();
        y(static_cast<Eigen::Index>(i)) = rng.uniform();
    }
    CHECK(mutual_information(x, x) > 1.0);
    CHECK(mutual_information(x, y) < 0.05);
    CHECK(mutual_information(x, y) >= -1e-12);
    CHECK(mutual_information(x, y) == doctest::Approx(mutual_information(y, x)));
    CHECK(mutual_information(x, Eigen::VectorXd::Constant(n, 3.0)) == 0.0);

    Eigen::MatrixXd a(n, 2);
    a << x, y;
    const Eigen::MatrixXd mi = mutual_information_matrix(a, a.rowwise().reverse());
    CHECK(mi.rows() == 2);
    CHECK(mi(0, 1) == doctest::Approx(mutual_information(x, x)));
}

TEST_CASE("core_community")
{
    Eigen::MatrixXd t(4, 3);
    t << 1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0;
    SUBCASE("single cluster is the column mean")
    {
        const CoreCommunity c = core_community({0, 0, 0, 0}, t, 1);
        CHECK((c.mean.row(0).transpose() - t.colwise().mean().transpose()).norm() < 1e-12);
    }
    SUBCASE("disjoint clusters")
    {
        const CoreCommunity c = core_community({0, 0, 1, 1}, t, 3);
        CHECK(c.mean.rows() == 3);
        CHECK(c.mean.cols() == 3);
        CHECK(c.mean(0, 0) == 1.0);
        CHECK(c.mean(1, 1) == 1.0);
        CHECK(c.mean.row(0).dot(c.mean.row(1)) == 0.0);
        CHECK(c.empty[2]);
        CHECK(std::isnan(c.mean(2, 0)));
        const Eigen::MatrixXd lv = log10_view(c.mean);
        CHECK(lv(0, 1) == doctest::Approx(-6.0));
        CHECK(std::isnan(lv(2, 0)));
        CHECK((lv.topRows(2).array() > -1e300).all());
    }
}

TEST_CASE("adjusted rand index")
{
    const std::vector<int> a{0, 0, 0, 1, 1, 1, 2, 2, 2};
    CHECK(adjusted_rand_index(a, a) == doctest::Approx(1.0));
    const std::vector<int> relabeled{2, 2, 2, 0, 0, 0, 1, 1, 1};
    CHECK(adjusted_rand_index(a, relabeled) == doctest::Approx(1.0));

    Rng rng(12);
    std::vector<int> x(600);
    std::vector<int> y(600);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<int>(rng.index(4));
        y[i] = static_cast<int>(rng.index(4));
    }
    CHECK(std::fabs(adjusted_rand_index(x, y)) < 0.05);
    for (int k = 0; k < 10; ++k) {
        std::vector<int> p(30);
        std::vector<int> q(30);
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = static_cast<int>(rng.index(3));
            q[i] = (i % 4 == 0) ? static_cast<int>(rng.index(3)) : p[i];
        }
        CHECK(std::fabs(adjusted_rand_index(p, q) - static_cast<double>(oracle::adjusted_rand_index(p, q))) < 1e-12);
    }
}
