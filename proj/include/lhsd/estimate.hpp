#ifndef LHSD_ESTIMATE_HPP
#define LHSD_ESTIMATE_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lhsd/joint_model.hpp"
#include "lhsd/sampler.hpp"

namespace lhsd {

/// Real-valued integrand evaluated on one sample row (declared order).
using Integrand = std::function<double(const Eigen::VectorXd&)>;

/// A sample mapped to the unit cube: z_jt is the conditional-cdf value of row
/// j at chain position t (so column t of z pairs with design column t), and
/// y_j is the integrand at row j.
struct TransformedSample {
    Eigen::MatrixXd z;  // n x K, chain-order columns, values in [0,1)
    Eigen::VectorXd y;
    std::vector<int> ordering;
    long long clamped = 0;

    int n() const { return static_cast<int>(z.rows()); }
    int dim() const { return static_cast<int>(z.cols()); }
};

/// Push a realized sample through the model's conditional cdfs and evaluate
/// the integrand. Works for any scheme; for LHSD-family samples the recovered
/// z reproduces the generating design.
TransformedSample transform_sample(const JointModel& model, const SampleMatrix& s,
                                   const Integrand& h);

/// Sample mean of the integrand values.
double estimate_tau(const Eigen::VectorXd& y);

/// One fitted main-effect curve: k-nearest-neighbor regression of the
/// centered responses on one z-column, re-centered to mean zero over the
/// training points. Evaluable anywhere on [0,1].
class MainEffect {
  public:
    MainEffect(const Eigen::VectorXd& z_col, const Eigen::VectorXd& y_centered, int k_neighbors);

    /// alpha_hat(z): mean of the k nearest training responses minus the
    /// re-centering constant.
    double operator()(double z) const;

    int k_neighbors() const { return k_; }

  private:
    double window_mean(double z) const;

    std::vector<double> z_sorted_;
    std::vector<double> prefix_;  // prefix sums of the sorted responses
    int k_;
    double center_ = 0.0;
};

/// Default neighbor count: max(5, round(sqrt(n))), capped at n.
int default_knn_k(int n);

/// Fit all K main effects on a transformed sample.
std::vector<MainEffect> fit_main_effects(const TransformedSample& ts, int k_neighbors);

/// r_i = y_i - y_bar - sum_k alpha_k(z_ik): the empirical residual from
/// additivity.
Eigen::VectorXd residuals(const TransformedSample& ts, const std::vector<MainEffect>& alphas);

struct VarianceEstimate {
    double var_lhsd_hat = 0.0;   // (sum r^2 / n) / n
    double var_srs_hat = 0.0;    // var_lhsd_hat + (sum_k mean alpha_k^2) / n
    double residual_l2 = 0.0;    // sum r^2 / n, estimates the residual integral
    double alpha_l2_sum = 0.0;   // sum_k mean alpha_k(z_k)^2
};

VarianceEstimate estimate_variance(const TransformedSample& ts,
                                   const std::vector<MainEffect>& alphas);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.0;
};

/// tau_hat +- z_{(1+level)/2} * sqrt(var_lhsd_hat); level in (0,1).
ConfidenceInterval confidence_interval(double tau_hat, double var_lhsd_hat, double level);

struct EstimateReport {
    double tau_hat = 0.0;
    int n = 0;
    Scheme scheme = Scheme::srs;
    std::vector<MainEffect> main_effects;
    Eigen::VectorXd residuals;
    double var_residual_hat = 0.0;  // estimate of the residual integral
    double var_lhsd_hat = 0.0;
    double var_srs_hat = 0.0;
    ConfidenceInterval ci;
    int knn_k = 0;
    long long clamped = 0;
};

/// Full estimation pipeline on one sample: transform, fit, variance, CI.
/// k_neighbors = 0 selects default_knn_k(n).
EstimateReport estimate_report(const JointModel& model, const SampleMatrix& s, const Integrand& h,
                               int k_neighbors = 0, double level = 0.95);

} // namespace lhsd

#endif
