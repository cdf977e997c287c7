#include "lhsd/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lhsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;
constexpr double kLogSqrt2Pi = 0.9189385332046727;

} // namespace

double standard_normal_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double standard_normal_quantile(double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("standard_normal_quantile: u outside [0,1]");
    if (u == 0.0) return -kInf;
    if (u == 1.0) return kInf;

    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (u < p_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - p_low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double err = standard_normal_cdf(x) - u;
    const double step = err * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= step / (1.0 + 0.5 * x * step);
    return x;
}

// ---------------------------------------------------------------------------
// Marginal
// ---------------------------------------------------------------------------

const char* marginal_family_name(MarginalFamily f) {
    switch (f) {
        case MarginalFamily::uniform: return "uniform";
        case MarginalFamily::normal: return "normal";
        case MarginalFamily::truncated_normal: return "truncated_normal";
        case MarginalFamily::gumbel: return "gumbel";
        case MarginalFamily::truncated_gumbel: return "truncated_gumbel";
        case MarginalFamily::triangular: return "triangular";
        case MarginalFamily::logistic: return "logistic";
    }
    return "?";
}

MarginalFamily marginal_family_from_name(const std::string& name) {
    if (name == "uniform") return MarginalFamily::uniform;
    if (name == "normal") return MarginalFamily::normal;
    if (name == "truncated_normal") return MarginalFamily::truncated_normal;
    if (name == "gumbel") return MarginalFamily::gumbel;
    if (name == "truncated_gumbel") return MarginalFamily::truncated_gumbel;
    if (name == "triangular") return MarginalFamily::triangular;
    if (name == "logistic") return MarginalFamily::logistic;
    throw std::invalid_argument("unknown marginal family: " + name);
}

namespace {

double gumbel_cdf(double mu, double beta, double x) {
    return std::exp(-std::exp(-(x - mu) / beta));
}

double gumbel_quantile(double mu, double beta, double u) {
    if (u == 0.0) return -kInf;
    if (u == 1.0) return kInf;
    return mu - beta * std::log(-std::log(u));
}

double normal_cdf(double mu, double sd, double x) { return standard_normal_cdf((x - mu) / sd); }

double normal_quantile(double mu, double sd, double u) {
    return mu + sd * standard_normal_quantile(u);
}

} // namespace

Marginal::Marginal(MarginalFamily f, std::array<double, 4> p) : family_(f), p_(p) {
    switch (family_) {
        case MarginalFamily::uniform:
            if (!(p_[0] < p_[1])) throw std::invalid_argument("uniform: requires a < b");
            break;
        case MarginalFamily::normal:
            if (!(p_[1] > 0.0)) throw std::invalid_argument("normal: requires sd > 0");
            break;
        case MarginalFamily::truncated_normal:
            if (!(p_[1] > 0.0)) throw std::invalid_argument("truncated_normal: requires sd > 0");
            if (!(p_[2] < p_[3])) throw std::invalid_argument("truncated_normal: requires lo < hi");
            trunc_lo_cdf_ = std::isinf(p_[2]) ? 0.0 : normal_cdf(p_[0], p_[1], p_[2]);
            trunc_hi_cdf_ = std::isinf(p_[3]) ? 1.0 : normal_cdf(p_[0], p_[1], p_[3]);
            if (!(trunc_hi_cdf_ > trunc_lo_cdf_))
                throw std::invalid_argument("truncated_normal: truncation window has no mass");
            break;
        case MarginalFamily::gumbel:
            if (!(p_[1] > 0.0)) throw std::invalid_argument("gumbel: requires beta > 0");
            break;
        case MarginalFamily::truncated_gumbel:
            if (!(p_[1] > 0.0)) throw std::invalid_argument("truncated_gumbel: requires beta > 0");
            if (!(p_[2] < p_[3])) throw std::invalid_argument("truncated_gumbel: requires lo < hi");
            trunc_lo_cdf_ = std::isinf(p_[2]) ? 0.0 : gumbel_cdf(p_[0], p_[1], p_[2]);
            trunc_hi_cdf_ = std::isinf(p_[3]) ? 1.0 : gumbel_cdf(p_[0], p_[1], p_[3]);
            if (!(trunc_hi_cdf_ > trunc_lo_cdf_))
                throw std::invalid_argument("truncated_gumbel: truncation window has no mass");
            break;
        case MarginalFamily::triangular:
            if (!(p_[0] < p_[2])) throw std::invalid_argument("triangular: requires a < b");
            if (!(p_[1] >= p_[0] && p_[1] <= p_[2]))
                throw std::invalid_argument("triangular: requires mode c in [a,b]");
            break;
        case MarginalFamily::logistic:
            if (!(p_[1] > 0.0)) throw std::invalid_argument("logistic: requires scale > 0");
            break;
    }
    for (double v : p_)
        if (std::isnan(v)) throw std::invalid_argument("marginal parameter is NaN");
}

Marginal Marginal::uniform(double a, double b) {
    return Marginal(MarginalFamily::uniform, {a, b, 0, 0});
}
Marginal Marginal::normal(double mu, double sd) {
    return Marginal(MarginalFamily::normal, {mu, sd, 0, 0});
}
Marginal Marginal::truncated_normal(double mu, double sd, double lo, double hi) {
    return Marginal(MarginalFamily::truncated_normal, {mu, sd, lo, hi});
}
Marginal Marginal::gumbel(double mu, double beta) {
    return Marginal(MarginalFamily::gumbel, {mu, beta, 0, 0});
}
Marginal Marginal::truncated_gumbel(double mu, double beta, double lo, double hi) {
    return Marginal(MarginalFamily::truncated_gumbel, {mu, beta, lo, hi});
}
Marginal Marginal::triangular(double a, double c, double b) {
    return Marginal(MarginalFamily::triangular, {a, c, b, 0});
}
Marginal Marginal::logistic(double location, double scale) {
    return Marginal(MarginalFamily::logistic, {location, scale, 0, 0});
}

double Marginal::support_lower() const {
    switch (family_) {
        case MarginalFamily::uniform: return p_[0];
        case MarginalFamily::normal: return -kInf;
        case MarginalFamily::truncated_normal: return p_[2];
        case MarginalFamily::gumbel: return -kInf;
        case MarginalFamily::truncated_gumbel: return p_[2];
        case MarginalFamily::triangular: return p_[0];
        case MarginalFamily::logistic: return -kInf;
    }
    return -kInf;
}

double Marginal::support_upper() const {
    switch (family_) {
        case MarginalFamily::uniform: return p_[1];
        case MarginalFamily::normal: return kInf;
        case MarginalFamily::truncated_normal: return p_[3];
        case MarginalFamily::gumbel: return kInf;
        case MarginalFamily::truncated_gumbel: return p_[3];
        case MarginalFamily::triangular: return p_[2];
        case MarginalFamily::logistic: return kInf;
    }
    return kInf;
}

std::vector<std::string> Marginal::param_names() const {
    switch (family_) {
        case MarginalFamily::uniform: return {"a", "b"};
        case MarginalFamily::normal: return {"mu", "sd"};
        case MarginalFamily::truncated_normal: return {"mu", "sd", "lo", "hi"};
        case MarginalFamily::gumbel: return {"mu", "beta"};
        case MarginalFamily::truncated_gumbel: return {"mu", "beta", "lo", "hi"};
        case MarginalFamily::triangular: return {"a", "c", "b"};
        case MarginalFamily::logistic: return {"location", "scale"};
    }
    return {};
}

double cdf(const Marginal& m, double x) {
    const auto& p = m.p_;
    switch (m.family_) {
        case MarginalFamily::uniform: {
            if (x <= p[0]) return 0.0;
            if (x >= p[1]) return 1.0;
            return (x - p[0]) / (p[1] - p[0]);
        }
        case MarginalFamily::normal:
            return normal_cdf(p[0], p[1], x);
        case MarginalFamily::truncated_normal: {
            if (x <= p[2]) return 0.0;
            if (x >= p[3]) return 1.0;
            const double v = (normal_cdf(p[0], p[1], x) - m.trunc_lo_cdf_) /
                             (m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
            return std::clamp(v, 0.0, 1.0);
        }
        case MarginalFamily::gumbel:
            return gumbel_cdf(p[0], p[1], x);
        case MarginalFamily::truncated_gumbel: {
            if (x <= p[2]) return 0.0;
            if (x >= p[3]) return 1.0;
            const double v = (gumbel_cdf(p[0], p[1], x) - m.trunc_lo_cdf_) /
                             (m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
            return std::clamp(v, 0.0, 1.0);
        }
        case MarginalFamily::triangular: {
            const double a = p[0], c = p[1], b = p[2];
            if (x <= a) return 0.0;
            if (x >= b) return 1.0;
            if (x <= c) return (x - a) * (x - a) / ((b - a) * (c - a));
            return 1.0 - (b - x) * (b - x) / ((b - a) * (b - c));
        }
        case MarginalFamily::logistic: {
            const double t = (x - p[0]) / p[1];
            return 1.0 / (1.0 + std::exp(-t));
        }
    }
    return 0.0;
}

double quantile(const Marginal& m, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u outside [0,1]");
    const auto& p = m.p_;
    switch (m.family_) {
        case MarginalFamily::uniform:
            return p[0] + u * (p[1] - p[0]);
        case MarginalFamily::normal:
            return normal_quantile(p[0], p[1], u);
        case MarginalFamily::truncated_normal: {
            if (u == 0.0) return p[2];
            if (u == 1.0) return p[3];
            const double uu = m.trunc_lo_cdf_ + u * (m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
            return std::clamp(normal_quantile(p[0], p[1], uu), p[2], p[3]);
        }
        case MarginalFamily::gumbel:
            return gumbel_quantile(p[0], p[1], u);
        case MarginalFamily::truncated_gumbel: {
            if (u == 0.0) return p[2];
            if (u == 1.0) return p[3];
            const double uu = m.trunc_lo_cdf_ + u * (m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
            return std::clamp(gumbel_quantile(p[0], p[1], uu), p[2], p[3]);
        }
        case MarginalFamily::triangular: {
            const double a = p[0], c = p[1], b = p[2];
            const double split = (c - a) / (b - a);
            if (u <= split) return a + std::sqrt(u * (b - a) * (c - a));
            return b - std::sqrt((1.0 - u) * (b - a) * (b - c));
        }
        case MarginalFamily::logistic: {
            if (u == 0.0) return -kInf;
            if (u == 1.0) return kInf;
            return p[0] + p[1] * std::log(u / (1.0 - u));
        }
    }
    return 0.0;
}

double log_pdf(const Marginal& m, double x) {
    const auto& p = m.p_;
    switch (m.family_) {
        case MarginalFamily::uniform: {
            if (x < p[0] || x > p[1]) return -kInf;
            return -std::log(p[1] - p[0]);
        }
        case MarginalFamily::normal: {
            const double t = (x - p[0]) / p[1];
            return -0.5 * t * t - std::log(p[1]) - kLogSqrt2Pi;
        }
        case MarginalFamily::truncated_normal: {
            if (x < p[2] || x > p[3]) return -kInf;
            const double t = (x - p[0]) / p[1];
            return -0.5 * t * t - std::log(p[1]) - kLogSqrt2Pi -
                   std::log(m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
        }
        case MarginalFamily::gumbel: {
            const double t = (x - p[0]) / p[1];
            return -std::log(p[1]) - t - std::exp(-t);
        }
        case MarginalFamily::truncated_gumbel: {
            if (x < p[2] || x > p[3]) return -kInf;
            const double t = (x - p[0]) / p[1];
            return -std::log(p[1]) - t - std::exp(-t) -
                   std::log(m.trunc_hi_cdf_ - m.trunc_lo_cdf_);
        }
        case MarginalFamily::triangular: {
            const double a = p[0], c = p[1], b = p[2];
            if (x < a || x > b) return -kInf;
            if (x <= c) {
                if (x == a && c == a) return std::log(2.0 / (b - a));  // right-angle at a
                return std::log(2.0 * (x - a)) - std::log((b - a) * (c - a));
            }
            if (x == b && c == b) return std::log(2.0 / (b - a));
            return std::log(2.0 * (b - x)) - std::log((b - a) * (b - c));
        }
        case MarginalFamily::logistic: {
            const double t = (x - p[0]) / p[1];
            const double core = (t >= 0.0) ? (-t - 2.0 * std::log1p(std::exp(-t)))
                                           : (t - 2.0 * std::log1p(std::exp(t)));
            return core - std::log(p[1]);
        }
    }
    return -kInf;
}

// ---------------------------------------------------------------------------
// multivariate normal
// ---------------------------------------------------------------------------

MvnSpec::MvnSpec(Eigen::VectorXd mu_in, Eigen::MatrixXd sigma_in)
    : mu(std::move(mu_in)), sigma(std::move(sigma_in)) {
    if (sigma.rows() != sigma.cols() || sigma.rows() != mu.size())
        throw std::invalid_argument("MvnSpec: dimension mismatch between mu and sigma");
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("MvnSpec: sigma is not symmetric");
    sigma = 0.5 * (sigma + sigma.transpose().eval());
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("MvnSpec: sigma is not positive definite");
}

MvnConditional mvn_conditional(const MvnSpec& spec, int k, const Eigen::VectorXd& x_prefix) {
    const int dim = spec.dimension();
    if (k < 2 || k > dim) throw std::invalid_argument("mvn_conditional: k must be in [2, K]");
    if (x_prefix.size() != k - 1)
        throw std::invalid_argument("mvn_conditional: prefix length must be k-1");
    if (!x_prefix.allFinite()) throw std::invalid_argument("mvn_conditional: prefix not finite");

    const int m = k - 1;
    const Eigen::MatrixXd block = spec.sigma.topLeftCorner(m, m);
    const Eigen::VectorXd sigma_k = spec.sigma.col(k - 1).head(m);
    Eigen::LLT<Eigen::MatrixXd> llt(block);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("mvn_conditional: leading block not positive definite");
    const Eigen::VectorXd w = llt.solve(sigma_k);

    MvnConditional out;
    out.k = k;
    out.mu_star = spec.mu(k - 1) + w.dot(x_prefix - spec.mu.head(m));
    out.sigma_star_sq = spec.sigma(k - 1, k - 1) - w.dot(sigma_k);
    return out;
}

MvnChain::MvnChain(MvnSpec spec) : spec_(std::move(spec)), llt_(spec_.sigma) {
    const int dim = spec_.dimension();
    weights_.resize(static_cast<std::size_t>(dim));
    sd_.resize(static_cast<std::size_t>(dim));
    sd_[0] = std::sqrt(spec_.sigma(0, 0));
    weights_[0] = Eigen::VectorXd();
    for (int t = 1; t < dim; ++t) {
        Eigen::LLT<Eigen::MatrixXd> block_llt(spec_.sigma.topLeftCorner(t, t));
        const Eigen::VectorXd sigma_col = spec_.sigma.col(t).head(t);
        const Eigen::VectorXd w = block_llt.solve(sigma_col);
        const double var = spec_.sigma(t, t) - w.dot(sigma_col);
        if (!(var > 0.0)) throw std::runtime_error("MvnChain: nonpositive conditional variance");
        weights_[static_cast<std::size_t>(t)] = w;
        sd_[static_cast<std::size_t>(t)] = std::sqrt(var);
    }
    double log_det = 0.0;
    for (int i = 0; i < dim; ++i) log_det += 2.0 * std::log(llt_.matrixL()(i, i));
    log_norm_const_ = -0.5 * (dim * std::log(2.0 * M_PI) + log_det);
}

double MvnChain::conditional_mean(int t, const Eigen::VectorXd& x_prefix) const {
    if (t == 0) return spec_.mu(0);
    const auto& w = weights_[static_cast<std::size_t>(t)];
    return spec_.mu(t) + w.dot(x_prefix.head(t) - spec_.mu.head(t));
}

double MvnChain::quantile(int t, double z, const Eigen::VectorXd& x_prefix) const {
    return conditional_mean(t, x_prefix) + sd_[static_cast<std::size_t>(t)] * standard_normal_quantile(z);
}

double MvnChain::cdf(int t, double x, const Eigen::VectorXd& x_prefix) const {
    return standard_normal_cdf((x - conditional_mean(t, x_prefix)) / sd_[static_cast<std::size_t>(t)]);
}

double MvnChain::log_density(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd centered = x - spec_.mu;
    const Eigen::VectorXd half = llt_.matrixL().solve(centered);
    return log_norm_const_ - 0.5 * half.squaredNorm();
}

} // namespace lhsd
