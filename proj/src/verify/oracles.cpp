#include "asopt/verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

namespace asopt::oracle {

long double adaptive_f(long double f0, std::size_t max_gen, std::size_t gen)
{
    const long double gm = static_cast<long double>(max_gen);
    const long double g = static_cast<long double>(gen);
    const long double phi = std::exp(1.0L - gm / (gm + 1.0L - g));
    return f0 * std::exp2(phi);
}

long double nonlinear_weight(std::size_t t, std::size_t total, long double w_start, long double w_end)
{
    const long double frac = 1.0L - static_cast<long double>(t) / static_cast<long double>(total);
    const long double arg = std::numbers::pi_v<long double> / 2.0L * std::sqrt(frac * frac * frac);
    return w_end + (w_start - w_end) * std::sin(arg);
}

std::size_t elite_count(std::size_t np, std::size_t t, std::size_t total, std::size_t elitnum)
{
    // floor by repeated subtraction
    std::size_t q = 0;
    for (std::size_t acc = np * t; acc >= total; acc -= total) {
        ++q;
    }
    return std::min(np, std::max(q, elitnum));
}

long double accept_prob(std::size_t t)
{
    return std::exp(-static_cast<long double>(t));
}

long double sigmoid_response(long double r, long double a)
{
    return 1.0L / (1.0L + std::exp(-a * r));
}

long double adaptive_rate(long double f, long double f_avg, long double f_max, long double lo, long double hi,
                          long double a)
{
    if (f > f_avg || f_max <= f_avg) {
        return hi;
    }
    long double r = (f - f_avg) / (f_max - f_avg);
    r = std::min(0.0L, std::max(-1.0L, r));
    const long double v
        = (hi - lo) * std::cos(r * std::numbers::pi_v<long double>) / (1.0L + std::exp(a * 2.0L * r)) + lo;
    return std::min(hi, std::max(lo, v));
}

namespace {

struct LongNet {
    std::size_t m = 0, h = 0, n = 0;
    std::vector<long double> w1, b1, w2, b2;
};

LongNet widen(const MlpNetwork& net)
{
    LongNet l;
    l.m = static_cast<std::size_t>(net.w1.cols());
    l.h = static_cast<std::size_t>(net.w1.rows());
    l.n = static_cast<std::size_t>(net.w2.rows());
    for (std::size_t i = 0; i < l.h; ++i) {
        for (std::size_t j = 0; j < l.m; ++j) {
            l.w1.push_back(net.w1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        l.b1.push_back(net.b1(static_cast<Eigen::Index>(i)));
    }
    for (std::size_t o = 0; o < l.n; ++o) {
        for (std::size_t i = 0; i < l.h; ++i) {
            l.w2.push_back(net.w2(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)));
        }
        l.b2.push_back(net.b2(static_cast<Eigen::Index>(o)));
    }
    return l;
}

long double objective(const LongNet& l, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, long double decay)
{
    long double sq = 0.0L;
    std::vector<long double> hidden(l.h);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (std::size_t i = 0; i < l.h; ++i) {
            long double z = l.b1[i];
            for (std::size_t j = 0; j < l.m; ++j) {
                z += l.w1[i * l.m + j] * static_cast<long double>(x(r, static_cast<Eigen::Index>(j)));
            }
            hidden[i] = 1.0L / (1.0L + std::exp(-z));
        }
        for (std::size_t o = 0; o < l.n; ++o) {
            long double out = l.b2[o];
            for (std::size_t i = 0; i < l.h; ++i) {
                out += l.w2[o * l.h + i] * hidden[i];
            }
            const long double d = out - static_cast<long double>(y(r, static_cast<Eigen::Index>(o)));
            sq += d * d;
        }
    }
    long double norm = 0.0L;
    for (long double w : l.w1) {
        norm += w * w;
    }
    for (long double w : l.w2) {
        norm += w * w;
    }
    return sq / static_cast<long double>(x.rows() * static_cast<Eigen::Index>(l.n)) + decay * norm / 2.0L;
}

} // namespace

long double mlp_objective(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                          long double decay)
{
    return objective(widen(net), x, y, decay);
}

FlatGradient mlp_gradient_fd(const MlpNetwork& net, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                             long double decay, long double h)
{
    LongNet l = widen(net);
    auto diff = [&](std::vector<long double>& params) {
        std::vector<long double> g(params.size());
        for (std::size_t k = 0; k < params.size(); ++k) {
            const long double saved = params[k];
            auto at = [&](long double step) {
                params[k] = saved + step;
                const long double v = objective(l, x, y, decay);
                params[k] = saved;
                return v;
            };
            const long double d1 = (at(h) - at(-h)) / (2.0L * h);
            const long double d2 = (at(h / 2.0L) - at(-h / 2.0L)) / h;
            g[k] = (4.0L * d2 - d1) / 3.0L;
        }
        return g;
    };
    FlatGradient out;
    out.w1 = diff(l.w1);
    out.b1 = diff(l.b1);
    out.w2 = diff(l.w2);
    out.b2 = diff(l.b2);
    return out;
}

double cluster_fitness_brute_force(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& data, double penalty,
                                   double min_sep)
{
    const auto l = static_cast<std::size_t>(centroids.rows());
    const auto n = static_cast<std::size_t>(data.rows());
    auto dist = [](const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
        long double s = 0.0L;
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            const long double d = static_cast<long double>(a(j)) - static_cast<long double>(b(j));
            s += d * d;
        }
        return std::sqrt(s);
    };
    long double sep = std::numeric_limits<long double>::infinity();
    for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = 0; b < l; ++b) {
            if (a != b) {
                sep = std::min(sep, dist(centroids.row(static_cast<Eigen::Index>(a)),
                                         centroids.row(static_cast<Eigen::Index>(b))));
            }
        }
    }
    if (l >= 2 && sep < static_cast<long double>(min_sep)) {
        return penalty;
    }

    // every assignment in {0..l-1}^n
    long double best = std::numeric_limits<long double>::infinity();
    std::vector<std::size_t> assignment(n, 0);
    while (true) {
        long double total = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            total += dist(data.row(static_cast<Eigen::Index>(i)),
                          centroids.row(static_cast<Eigen::Index>(assignment[i])));
        }
        best = std::min(best, total);
        std::size_t pos = 0;
        while (pos < n && ++assignment[pos] == l) {
            assignment[pos++] = 0;
        }
        if (pos == n) {
            break;
        }
    }
    return static_cast<double>(static_cast<long double>(l) * best / sep);
}

long double reconstruction_loss(const Eigen::MatrixXd& r, const Eigen::MatrixXd& r_tilde)
{
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        long double s = 0.0L;
        for (Eigen::Index j = 0; j < r.cols(); ++j) {
            const long double d = static_cast<long double>(r(i, j)) - static_cast<long double>(r_tilde(i, j));
            s += d * d;
        }
        total += std::sqrt(s);
    }
    return total / static_cast<long double>(r.rows());
}

long double supervised_loss(const Eigen::MatrixXd& h_real, const Eigen::MatrixXd& h_pred)
{
    return reconstruction_loss(h_real, h_pred);
}

long double unsupervised_loss(const Eigen::VectorXd& y_real, const Eigen::VectorXd& y_fake, long double clamp)
{
    auto c = [clamp](double p) { return std::min(1.0L - clamp, std::max(clamp, static_cast<long double>(p))); };
    long double a = 0.0L;
    for (Eigen::Index i = 0; i < y_real.size(); ++i) {
        a += std::log(c(y_real(i)));
    }
    long double b = 0.0L;
    for (Eigen::Index i = 0; i < y_fake.size(); ++i) {
        b += std::log(1.0L - c(y_fake(i)));
    }
    return a / static_cast<long double>(y_real.size()) + b / static_cast<long double>(y_fake.size());
}

long double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b)
{
    const std::size_t n = a.size();
    long double both = 0.0L;
    long double in_a = 0.0L;
    long double in_b = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool sa = a[i] == a[j];
            const bool sb = b[i] == b[j];
            both += sa && sb;
            in_a += sa;
            in_b += sb;
        }
    }
    const long double pairs = static_cast<long double>(n) * static_cast<long double>(n - 1) / 2.0L;
    const long double expected = in_a * in_b / pairs;
    const long double max_index = (in_a + in_b) / 2.0L;
    if (max_index == expected) {
        return 1.0L;
    }
    return (both - expected) / (max_index - expected);
}

std::vector<long double> garson(const MlpNetwork& net)
{
    const auto m = static_cast<std::size_t>(net.w1.cols());
    const auto h = static_cast<std::size_t>(net.w1.rows());
    std::vector<long double> imp(m, 0.0L);
    for (std::size_t k = 0; k < h; ++k) {
        long double in_sum = 0.0L;
        for (std::size_t i = 0; i < m; ++i) {
            in_sum += std::fabs(static_cast<long double>(net.w1(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))));
        }
        if (in_sum == 0.0L) {
            continue;
        }
        long double out_sum = 0.0L;
        for (Eigen::Index o = 0; o < net.w2.rows(); ++o) {
            out_sum += std::fabs(static_cast<long double>(net.w2(o, static_cast<Eigen::Index>(k))));
        }
        for (std::size_t i = 0; i < m; ++i) {
            imp[i] += std::fabs(static_cast<long double>(net.w1(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i))))
                      / in_sum * out_sum;
        }
    }
    long double total = 0.0L;
    for (long double v : imp) {
        total += v;
    }
    if (total > 0.0L) {
        for (long double& v : imp) {
            v /= total;
        }
    }
    return imp;
}

} // namespace asopt::oracle
