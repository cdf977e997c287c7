#include "lhsd/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lhsd {

TransformedSample transform_sample(const JointModel& model, const SampleMatrix& s,
                                   const Integrand& h) {
    const int k = model.dimension();
    if (s.dim() != k) throw std::invalid_argument("sample dimension does not match the model");
    const int n = s.n();
    const auto& ord = model.ordering();

    TransformedSample ts;
    ts.ordering = ord;
    ts.z.resize(n, k);
    ts.y.resize(n);

    ClampStats clamp;
    Eigen::VectorXd prefix(k);
    for (int j = 0; j < n; ++j) {
        for (int t = 0; t < k; ++t) {
            const double x = s.x(j, ord[static_cast<std::size_t>(t)]);
            ts.z(j, t) = model.chain_cdf(t, x, prefix.head(t), &clamp);
            prefix(t) = x;
        }
        ts.y(j) = h(s.x.row(j).transpose());
    }
    ts.clamped = clamp.clamped;
    return ts;
}

double estimate_tau(const Eigen::VectorXd& y) {
    if (y.size() == 0) throw std::invalid_argument("estimate_tau: empty sample");
    if (!y.allFinite()) throw std::invalid_argument("estimate_tau: non-finite integrand value");
    return y.mean();
}

// ---------------------------------------------------------------------------
// main effects
// ---------------------------------------------------------------------------

MainEffect::MainEffect(const Eigen::VectorXd& z_col, const Eigen::VectorXd& y_centered,
                       int k_neighbors)
    : k_(k_neighbors) {
    const int n = static_cast<int>(z_col.size());
    if (n == 0) throw std::invalid_argument("main effect fit needs at least one point");
    if (y_centered.size() != n)
        throw std::invalid_argument("main effect fit: z and y length mismatch");
    if (k_ < 1 || k_ > n)
        throw std::invalid_argument("k_neighbors must satisfy 1 <= k <= n");

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return z_col(a) < z_col(b); });

    z_sorted_.resize(static_cast<std::size_t>(n));
    prefix_.resize(static_cast<std::size_t>(n) + 1);
    prefix_[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        z_sorted_[static_cast<std::size_t>(i)] = z_col(idx[static_cast<std::size_t>(i)]);
        prefix_[static_cast<std::size_t>(i) + 1] =
            prefix_[static_cast<std::size_t>(i)] + y_centered(idx[static_cast<std::size_t>(i)]);
    }

    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += window_mean(z_col(i));
    center_ = sum / n;
}

double MainEffect::window_mean(double z) const {
    const int n = static_cast<int>(z_sorted_.size());
    const auto begin = z_sorted_.begin();
    int r = static_cast<int>(std::lower_bound(begin, z_sorted_.end(), z) - begin);
    int l = r - 1;
    for (int taken = 0; taken < k_; ++taken) {
        if (l < 0)
            ++r;
        else if (r >= n)
            --l;
        else if (z - z_sorted_[static_cast<std::size_t>(l)] <=
                 z_sorted_[static_cast<std::size_t>(r)] - z)
            --l;
        else
            ++r;
    }
    // window is (l, r): indices l+1 .. r-1, exactly k_ of them
    return (prefix_[static_cast<std::size_t>(r)] - prefix_[static_cast<std::size_t>(l) + 1]) / k_;
}

double MainEffect::operator()(double z) const { return window_mean(z) - center_; }

int default_knn_k(int n) {
    const int k = std::max(5, static_cast<int>(std::lround(std::sqrt(static_cast<double>(n)))));
    return std::min(k, n);
}

std::vector<MainEffect> fit_main_effects(const TransformedSample& ts, int k_neighbors) {
    const int n = ts.n();
    if (n < 1) throw std::invalid_argument("fit_main_effects: empty sample");
    if (k_neighbors < 1 || k_neighbors > n)
        throw std::invalid_argument("fit_main_effects: k_neighbors must satisfy 1 <= k <= n");
    const double y_bar = ts.y.mean();
    const Eigen::VectorXd y_centered = ts.y.array() - y_bar;
    std::vector<MainEffect> alphas;
    alphas.reserve(static_cast<std::size_t>(ts.dim()));
    for (int t = 0; t < ts.dim(); ++t)
        alphas.emplace_back(ts.z.col(t), y_centered, k_neighbors);
    return alphas;
}

Eigen::VectorXd residuals(const TransformedSample& ts, const std::vector<MainEffect>& alphas) {
    if (static_cast<int>(alphas.size()) != ts.dim())
        throw std::invalid_argument("residuals: one main effect per dimension required");
    const double y_bar = ts.y.mean();
    Eigen::VectorXd r(ts.n());
    for (int j = 0; j < ts.n(); ++j) {
        double acc = ts.y(j) - y_bar;
        for (int t = 0; t < ts.dim(); ++t) acc -= alphas[static_cast<std::size_t>(t)](ts.z(j, t));
        r(j) = acc;
    }
    return r;
}

VarianceEstimate estimate_variance(const TransformedSample& ts,
                                   const std::vector<MainEffect>& alphas) {
    const int n = ts.n();
    const Eigen::VectorXd r = residuals(ts, alphas);
    VarianceEstimate v;
    v.residual_l2 = r.squaredNorm() / n;
    v.var_lhsd_hat = v.residual_l2 / n;
    v.alpha_l2_sum = 0.0;
    for (int t = 0; t < ts.dim(); ++t) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = alphas[static_cast<std::size_t>(t)](ts.z(j, t));
            acc += a * a;
        }
        v.alpha_l2_sum += acc / n;
    }
    v.var_srs_hat = v.var_lhsd_hat + v.alpha_l2_sum / n;
    return v;
}

ConfidenceInterval confidence_interval(double tau_hat, double var_lhsd_hat, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0,1)");
    if (var_lhsd_hat < 0.0) throw std::invalid_argument("negative variance estimate");
    const double half = standard_normal_quantile(0.5 * (1.0 + level)) * std::sqrt(var_lhsd_hat);
    return {tau_hat - half, tau_hat + half, level};
}

EstimateReport estimate_report(const JointModel& model, const SampleMatrix& s, const Integrand& h,
                               int k_neighbors, double level) {
    TransformedSample ts = transform_sample(model, s, h);
    const int knn = k_neighbors > 0 ? k_neighbors : default_knn_k(ts.n());

    EstimateReport rep;
    rep.n = ts.n();
    rep.scheme = s.scheme;
    rep.knn_k = knn;
    rep.clamped = ts.clamped + s.clamped;
    rep.tau_hat = estimate_tau(ts.y);
    rep.main_effects = fit_main_effects(ts, knn);
    rep.residuals = residuals(ts, rep.main_effects);

    const VarianceEstimate v = estimate_variance(ts, rep.main_effects);
    rep.var_residual_hat = v.residual_l2;
    rep.var_lhsd_hat = v.var_lhsd_hat;
    rep.var_srs_hat = v.var_srs_hat;
    rep.ci = confidence_interval(rep.tau_hat, rep.var_lhsd_hat, level);
    return rep;
}

} // namespace lhsd
