#include "lhsd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace lhsd {

double digamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("digamma requires x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // asymptotic series through the 1/x^10 term; truncation error stays
    // below 1e-13 once x has been lifted past 10
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 -
                   inv2 * (1.0 / 120.0 -
                           inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
}

double kl_entropy(const Eigen::MatrixXd& x, int k_entropy, long long* jittered) {
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    if (d < 1) throw std::invalid_argument("kl_entropy: empty dimension");
    if (k_entropy < 1 || k_entropy >= n)
        throw std::invalid_argument("kl_entropy: need 1 <= k_entropy < n");

    Eigen::MatrixXd pts = x;

    // Perturb exact duplicate rows so every nearest-neighbor distance is
    // positive; duplicates can only come from degenerate inputs.
    long long perturbed = 0;
    {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            for (int c = 0; c < d; ++c) {
                if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
            }
            return a < b;
        });
        // Compare against the unmodified input so every copy in a run of g
        // identical rows gets its own offset 1e-12 * occurrence.
        int group = 0;
        for (int r = 1; r < n; ++r) {
            const int prev = idx[static_cast<std::size_t>(r - 1)];
            const int cur = idx[static_cast<std::size_t>(r)];
            bool same = true;
            for (int c = 0; c < d; ++c)
                if (x(prev, c) != x(cur, c)) {
                    same = false;
                    break;
                }
            if (same) {
                ++group;
                pts(cur, 0) += 1e-12 * group;
                ++perturbed;
            } else {
                group = 0;
            }
        }
    }
    if (jittered) *jittered = perturbed;

    std::vector<double> dist_sq(static_cast<std::size_t>(n));
    double log_eps_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            dist_sq[m++] = (pts.row(i) - pts.row(j)).squaredNorm();
        }
        std::nth_element(dist_sq.begin(), dist_sq.begin() + (k_entropy - 1), dist_sq.begin() + m);
        const double eps_sq = dist_sq[static_cast<std::size_t>(k_entropy - 1)];
        if (!(eps_sq > 0.0))
            throw std::runtime_error("kl_entropy: zero nearest-neighbor distance persists");
        log_eps_sum += 0.5 * std::log(eps_sq);
    }

    const double log_cd = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
    return digamma(n) - digamma(k_entropy) + log_cd +
           static_cast<double>(d) / n * log_eps_sum;
}

KlReport kl_divergence(const Eigen::MatrixXd& x, const LogDensity& log_f, int k_entropy) {
    const int n = static_cast<int>(x.rows());
    if (k_entropy < 1 || k_entropy >= n)
        throw std::invalid_argument("kl_divergence: need 1 <= k_entropy < n");

    KlReport rep;
    rep.k_entropy = k_entropy;

    double cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lf = log_f(x.row(i).transpose());
        if (!std::isfinite(lf))
            throw std::runtime_error("kl_divergence: target log-density not finite at sample row " +
                                     std::to_string(i));
        cross += lf;
    }
    rep.cross_term = cross / n;
    rep.entropy_hat = kl_entropy(x, k_entropy, &rep.jittered_duplicates);
    rep.kl_hat = -rep.entropy_hat - rep.cross_term;
    return rep;
}

KlReport kl_divergence(const SampleMatrix& s, const LogDensity& log_f, int k_entropy) {
    return kl_divergence(s.x, log_f, k_entropy);
}

// ---------------------------------------------------------------------------
// correlation tables
// ---------------------------------------------------------------------------

CorrelationAccumulator::CorrelationAccumulator(int dim) : dim_(dim) {
    if (dim < 2) throw std::invalid_argument("correlation accumulator needs dimension >= 2");
    sum_corr_ = Eigen::MatrixXd::Zero(dim, dim);
    sum_corr_sq_ = Eigen::MatrixXd::Zero(dim, dim);
}

void CorrelationAccumulator::add(const Eigen::MatrixXd& x) {
    if (static_cast<int>(x.cols()) != dim_)
        throw std::invalid_argument("correlation accumulator: dimension mismatch");
    const int n = static_cast<int>(x.rows());
    if (n < 2) throw std::invalid_argument("correlation accumulator: need n >= 2 rows");

    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    const Eigen::VectorXd norms = centered.colwise().norm();
    for (int c = 0; c < dim_; ++c)
        if (!(norms(c) > 0.0))
            throw std::runtime_error("correlation undefined: column " + std::to_string(c + 1) +
                                     " is constant");

    for (int a = 0; a < dim_; ++a) {
        for (int b = a + 1; b < dim_; ++b) {
            const double corr = centered.col(a).dot(centered.col(b)) / (norms(a) * norms(b));
            sum_corr_(a, b) += corr;
            sum_corr_sq_(a, b) += corr * corr;
        }
    }
    ++reps_;
}

double CorrelationAccumulator::mean_corr(int i, int j) const {
    if (reps_ == 0) throw std::logic_error("no replications accumulated");
    if (i > j) std::swap(i, j);
    return sum_corr_(i, j) / reps_;
}

double CorrelationAccumulator::mse_against(int i, int j, double target) const {
    if (reps_ == 0) throw std::logic_error("no replications accumulated");
    if (i > j) std::swap(i, j);
    return sum_corr_sq_(i, j) / reps_ - 2.0 * target * sum_corr_(i, j) / reps_ + target * target;
}

CorrelationReport correlation_table(const CorrelationAccumulator& acc,
                                    const std::vector<PairCorrelation>& targets) {
    if (acc.replications() < 2)
        throw std::invalid_argument("correlation_table: need at least 2 replications");

    CorrelationReport rep;
    rep.replications = acc.replications();

    std::set<std::pair<int, int>> targeted;
    for (const auto& t : targets) {
        if (t.i < 1 || t.i > acc.dim() || t.j < 1 || t.j > acc.dim() || t.i == t.j)
            throw std::invalid_argument("correlation_table: bad target pair");
        const int a = std::min(t.i, t.j) - 1;
        const int b = std::max(t.i, t.j) - 1;
        targeted.emplace(a, b);
        CorrelationReport::Row row;
        row.i = a + 1;
        row.j = b + 1;
        row.rho_target = t.rho;
        row.mean_corr = acc.mean_corr(a, b);
        row.bias = row.mean_corr - t.rho;
        row.mse = acc.mse_against(a, b, t.rho);
        rep.pairs.push_back(row);
    }

    for (int a = 0; a < acc.dim(); ++a) {
        for (int b = a + 1; b < acc.dim(); ++b) {
            if (targeted.count({a, b})) continue;
            rep.max_abs_other_bias = std::max(rep.max_abs_other_bias, std::abs(acc.mean_corr(a, b)));
            rep.max_other_mse = std::max(rep.max_other_mse, acc.mse_against(a, b, 0.0));
        }
    }
    return rep;
}

} // namespace lhsd
