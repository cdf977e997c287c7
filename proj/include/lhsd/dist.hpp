#ifndef LHSD_DIST_HPP
#define LHSD_DIST_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lhsd {

// ---------------------------------------------------------------------------
// standard normal special functions
// ---------------------------------------------------------------------------

double standard_normal_pdf(double x);
double standard_normal_cdf(double x);

/// Inverse standard normal cdf. Rational approximation polished by one Halley
/// step; absolute error well below 1e-12 on (0,1). Returns -inf/+inf at 0/1.
double standard_normal_quantile(double u);

// ---------------------------------------------------------------------------
// univariate marginals
// ---------------------------------------------------------------------------

enum class MarginalFamily {
    uniform,
    normal,
    truncated_normal,
    gumbel,
    truncated_gumbel,
    triangular,
    logistic,
};

const char* marginal_family_name(MarginalFamily f);
MarginalFamily marginal_family_from_name(const std::string& name);

/// Immutable univariate distribution. Construct through the named factories;
/// parameters are validated once, at construction. Normal-family scale
/// parameters are standard deviations. Gumbel is the location/scale family
/// with cdf exp(-exp(-(x-mu)/beta)). Triangular takes (min, mode, max).
class Marginal {
  public:
    static Marginal uniform(double a, double b);
    static Marginal normal(double mu, double sd);
    static Marginal truncated_normal(double mu, double sd, double lo, double hi);
    static Marginal gumbel(double mu, double beta);
    static Marginal truncated_gumbel(double mu, double beta, double lo, double hi);
    static Marginal triangular(double a, double c, double b);
    static Marginal logistic(double location, double scale);

    MarginalFamily family() const { return family_; }
    double support_lower() const;
    double support_upper() const;

    /// Raw parameters in factory order (unused slots are zero).
    const std::array<double, 4>& params() const { return p_; }
    /// Parameter names in factory order, e.g. {"mu","sd"} for normal.
    std::vector<std::string> param_names() const;

  private:
    Marginal(MarginalFamily f, std::array<double, 4> p);

    MarginalFamily family_;
    std::array<double, 4> p_{};
    double trunc_lo_cdf_ = 0.0;  // parent cdf at truncation bounds
    double trunc_hi_cdf_ = 1.0;

    friend double cdf(const Marginal&, double);
    friend double quantile(const Marginal&, double);
    friend double log_pdf(const Marginal&, double);
};

/// cdf(m, x): monotone, exactly 0 below the support and 1 above it.
double cdf(const Marginal& m, double x);

/// quantile(m, u) = inf{x : cdf(x) >= u} for u in [0,1]; u=0 and u=1 map to
/// the support bounds (+-inf for unbounded families). Throws std::domain_error
/// outside [0,1].
double quantile(const Marginal& m, double u);

/// Natural log of the density; -inf outside the support.
double log_pdf(const Marginal& m, double x);

// ---------------------------------------------------------------------------
// multivariate normal conditionals
// ---------------------------------------------------------------------------

/// Mean vector and covariance matrix; sigma must be symmetric positive
/// definite (checked with a Cholesky factorization at construction).
struct MvnSpec {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;

    MvnSpec(Eigen::VectorXd mu_in, Eigen::MatrixXd sigma_in);
    int dimension() const { return static_cast<int>(mu.size()); }
};

struct MvnConditional {
    double mu_star = 0.0;
    double sigma_star_sq = 0.0;
    int k = 0;  // 1-based component index
};

/// Conditional law of component k (1-based, k >= 2) given the first k-1
/// components: mu* = mu_k + s_k' S_kk^-1 (x - mu_prefix), s*^2 = s_kk -
/// s_k' S_kk^-1 s_k, where S_kk is the leading (k-1)x(k-1) block of sigma.
MvnConditional mvn_conditional(const MvnSpec& spec, int k, const Eigen::VectorXd& x_prefix);

/// Precomputed conditional chain of an MVN: weight vectors and residual sds
/// for every position, so sequential sampling costs one dot product per
/// component. Positions are 0-based; position 0 is the unconditional marginal.
class MvnChain {
  public:
    explicit MvnChain(MvnSpec spec);

    int dimension() const { return spec_.dimension(); }
    const MvnSpec& spec() const { return spec_; }

    double conditional_mean(int t, const Eigen::VectorXd& x_prefix) const;
    double conditional_sd(int t) const { return sd_[static_cast<std::size_t>(t)]; }

    /// x_t = mu*(prefix) + sd_t * Phi^-1(z)
    double quantile(int t, double z, const Eigen::VectorXd& x_prefix) const;
    /// Phi((x - mu*(prefix)) / sd_t)
    double cdf(int t, double x, const Eigen::VectorXd& x_prefix) const;

    double log_density(const Eigen::VectorXd& x) const;

  private:
    MvnSpec spec_;
    std::vector<Eigen::VectorXd> weights_;  // weights_[t] has length t
    std::vector<double> sd_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
    double log_norm_const_ = 0.0;
};

} // namespace lhsd

#endif
