#ifndef LHSD_COPULA_HPP
#define LHSD_COPULA_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lhsd {

// ---------------------------------------------------------------------------
// copula families
// ---------------------------------------------------------------------------

enum class CopulaFamily {
    independent,
    gaussian,
    bivariate_logistic,
};

const char* copula_family_name(CopulaFamily f);
CopulaFamily copula_family_from_name(const std::string& name);

/// Sparse correlation entry for building a Gaussian copula from pairwise
/// dependence. Indices are 1-based component labels, matching config files.
struct PairCorrelation {
    int i = 0;
    int j = 0;
    double rho = 0.0;
};

/// Immutable copula on [0,1]^K. The Gaussian family carries a unit-diagonal
/// positive definite correlation matrix (checked at construction); the
/// bivariate logistic family is Gumbel's C(u1,u2) = u1*u2/(u1+u2-u1*u2).
class Copula {
  public:
    static Copula independent(int dimension);
    static Copula gaussian(Eigen::MatrixXd correlation);
    /// Expands {i, j, rho} entries (1-based, i != j) into a full correlation
    /// matrix with unit diagonal and zeros elsewhere, then validates it.
    static Copula gaussian_from_pairs(int dimension, const std::vector<PairCorrelation>& pairs);
    static Copula bivariate_logistic();

    CopulaFamily family() const { return family_; }
    int dimension() const { return dimension_; }

    /// Gaussian correlation matrix; throws std::logic_error for other families.
    const Eigen::MatrixXd& correlation() const;

    /// C(u). Coordinates at 0/1 are honored exactly (grounded/uniform-margin
    /// behavior). For the Gaussian family only K <= 2 is supported (higher
    /// dimensions would need multivariate normal quadrature, which nothing
    /// downstream requires); larger K throws std::invalid_argument.
    double cdf(const Eigen::VectorXd& u) const;

    /// Log copula density at an interior point of (0,1)^K.
    double log_density(const Eigen::VectorXd& u) const;

    /// Copula of the relabeled vector (U_{ordering[0]}, ..., U_{ordering[K-1]});
    /// ordering is a 0-based permutation.
    Copula permuted(const std::vector<int>& ordering) const;

  private:
    Copula(CopulaFamily f, int dim, Eigen::MatrixXd corr);

    CopulaFamily family_;
    int dimension_;
    Eigen::MatrixXd corr_;        // gaussian only
    Eigen::LLT<Eigen::MatrixXd> corr_llt_;
    double corr_log_det_ = 0.0;
};

/// Standard bivariate normal cdf P(X <= x, Y <= y) with correlation rho,
/// via Drezner's single quadrature; accurate to ~1e-14 for |rho| <= 0.95.
double bivariate_normal_cdf(double x, double y, double rho);

// ---------------------------------------------------------------------------
// conditional copulas
// ---------------------------------------------------------------------------

/// The k-th conditional copula C_k(u_k | u_1..u_{k-1}) of a parent copula,
/// k >= 2 (1-based). Gaussian conditionals are precomputed at construction
/// (normal-score regression weights and residual sd), so evaluation is O(k).
class ConditionalCopula {
  public:
    ConditionalCopula(const Copula& parent, int k);

    const Copula& parent() const { return parent_; }
    int k() const { return k_; }

  private:
    Copula parent_;
    int k_;
    Eigen::VectorXd w_;  // gaussian: weights on the conditioning normal scores
    double s_ = 1.0;     // gaussian: conditional standard deviation

    friend double conditional_cdf(const ConditionalCopula&, double, const Eigen::VectorXd&);
    friend double conditional_quantile(const ConditionalCopula&, double, const Eigen::VectorXd&);
    friend double conditional_density(const ConditionalCopula&, double, const Eigen::VectorXd&);
};

/// C_k(u_k | cond) for u_k in [0,1] and cond strictly inside (0,1)^{k-1}.
/// Throws std::domain_error when a conditioning coordinate sits on the
/// boundary (the defining derivative does not exist there).
double conditional_cdf(const ConditionalCopula& cc, double u_k, const Eigen::VectorXd& cond);

/// Inverse of conditional_cdf in its first argument: the u_k in (0,1) with
/// C_k(u_k | cond) = z, for z in (0,1). Closed forms for every implemented
/// family; see numeric_conditional_quantile for the generic path.
double conditional_quantile(const ConditionalCopula& cc, double z, const Eigen::VectorXd& cond);

/// d/du_k C_k(u_k | cond): the conditional density on (0,1).
double conditional_density(const ConditionalCopula& cc, double u_k, const Eigen::VectorXd& cond);

/// Generic inversion of conditional_cdf: bracketed bisection on
/// [1e-12, 1-1e-12] followed by Newton polish with conditional_density.
/// Agrees with the closed forms to 1e-10; throws std::runtime_error with the
/// offending (z, k) if the bracket cannot be closed.
double numeric_conditional_quantile(const ConditionalCopula& cc, double z, const Eigen::VectorXd& cond);

// ---------------------------------------------------------------------------
// composition with marginals
// ---------------------------------------------------------------------------

class Marginal;

/// F(x_k | x_1..x_{k-1}) for the joint law (marginals, cop): the conditional
/// copula evaluated at u_i = F_i(x_i). k is 1-based; k = 1 returns the plain
/// marginal cdf. Throws std::domain_error when the prefix maps to a boundary
/// u (prefix on the support boundary).
double conditional_input_cdf(const std::vector<Marginal>& marginals, const Copula& cop, int k,
                             double x_k, const Eigen::VectorXd& x_prefix);

// ---------------------------------------------------------------------------
// interior clamping for composed transforms
// ---------------------------------------------------------------------------

inline constexpr double kUnitClampEps = 1e-12;

struct ClampStats {
    long long clamped = 0;
};

/// Pulls u into [kUnitClampEps, 1-kUnitClampEps], counting every adjustment.
/// Conditional-copula evaluation rejects boundary conditioning values, but
/// composed transforms can underflow to exact 0/1; callers clamp at those
/// composition points and surface the counter in their reports.
double clamp_unit_interior(double u, ClampStats& stats);

} // namespace lhsd

#endif
