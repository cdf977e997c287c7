#include "lhsd/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lhsd/dist.hpp"

namespace lhsd {

namespace {

void check_unit_closed(double u, const char* what) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error(std::string(what) + " outside [0,1]");
}

void check_cond_interior(const Eigen::VectorXd& cond, int expected) {
    if (cond.size() != expected)
        throw std::invalid_argument("conditioning vector has wrong length");
    for (Eigen::Index i = 0; i < cond.size(); ++i)
        if (!(cond(i) > 0.0 && cond(i) < 1.0))
            throw std::domain_error("conditioning value on the boundary of (0,1)");
}

} // namespace

const char* copula_family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::independent: return "independent";
        case CopulaFamily::gaussian: return "gaussian";
        case CopulaFamily::bivariate_logistic: return "bivariate_logistic";
    }
    return "?";
}

CopulaFamily copula_family_from_name(const std::string& name) {
    if (name == "independent") return CopulaFamily::independent;
    if (name == "gaussian") return CopulaFamily::gaussian;
    if (name == "bivariate_logistic") return CopulaFamily::bivariate_logistic;
    throw std::invalid_argument("unknown copula family: " + name);
}

// ---------------------------------------------------------------------------
// Copula
// ---------------------------------------------------------------------------

Copula::Copula(CopulaFamily f, int dim, Eigen::MatrixXd corr)
    : family_(f), dimension_(dim), corr_(std::move(corr)) {
    if (dimension_ < 1) throw std::invalid_argument("copula dimension must be >= 1");
    if (family_ == CopulaFamily::gaussian) {
        if (corr_.rows() != dimension_ || corr_.cols() != dimension_)
            throw std::invalid_argument("gaussian copula: correlation matrix shape mismatch");
        const double scale = std::max(1.0, corr_.cwiseAbs().maxCoeff());
        if ((corr_ - corr_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
            throw std::invalid_argument("gaussian copula: correlation not symmetric");
        for (int i = 0; i < dimension_; ++i)
            if (std::abs(corr_(i, i) - 1.0) > 1e-12)
                throw std::invalid_argument("gaussian copula: diagonal must be 1");
        corr_ = 0.5 * (corr_ + corr_.transpose().eval());
        corr_llt_.compute(corr_);
        if (corr_llt_.info() != Eigen::Success)
            throw std::invalid_argument("gaussian copula: correlation not positive definite");
        corr_log_det_ = 0.0;
        for (int i = 0; i < dimension_; ++i)
            corr_log_det_ += 2.0 * std::log(corr_llt_.matrixL()(i, i));
    }
}

Copula Copula::independent(int dimension) {
    return Copula(CopulaFamily::independent, dimension, Eigen::MatrixXd());
}

Copula Copula::gaussian(Eigen::MatrixXd correlation) {
    const int dim = static_cast<int>(correlation.rows());
    return Copula(CopulaFamily::gaussian, dim, std::move(correlation));
}

Copula Copula::gaussian_from_pairs(int dimension, const std::vector<PairCorrelation>& pairs) {
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(dimension, dimension);
    for (const auto& p : pairs) {
        if (p.i < 1 || p.i > dimension || p.j < 1 || p.j > dimension)
            throw std::invalid_argument("correlation pair index out of range");
        if (p.i == p.j) throw std::invalid_argument("correlation pair with i == j");
        if (!(p.rho > -1.0 && p.rho < 1.0))
            throw std::invalid_argument("pair correlation must lie in (-1,1)");
        const int a = p.i - 1, b = p.j - 1;
        if (corr(a, b) != 0.0 && corr(a, b) != p.rho)
            throw std::invalid_argument("conflicting duplicate correlation pair");
        corr(a, b) = corr(b, a) = p.rho;
    }
    return gaussian(std::move(corr));
}

Copula Copula::bivariate_logistic() {
    return Copula(CopulaFamily::bivariate_logistic, 2, Eigen::MatrixXd());
}

const Eigen::MatrixXd& Copula::correlation() const {
    if (family_ != CopulaFamily::gaussian)
        throw std::logic_error("correlation() requires the gaussian family");
    return corr_;
}

double bivariate_normal_cdf(double x, double y, double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in (-1,1)");
    if (std::isinf(x) || std::isinf(y)) {
        if (x == -std::numeric_limits<double>::infinity() ||
            y == -std::numeric_limits<double>::infinity())
            return 0.0;
        if (std::isinf(x)) return standard_normal_cdf(y);
        return standard_normal_cdf(x);
    }
    // Drezner: Phi2(x,y;rho) = Phi(x)Phi(y)
    //   + (1/2pi) \int_0^{asin rho} exp(-(x^2 - 2xy sin t + y^2)/(2 cos^2 t)) dt
    static const double nodes[] = {
        0.0052995325041750, 0.0277124884633837, 0.0671843988060841, 0.1222977958224985,
        0.1910618777986781, 0.2709916111713863, 0.3591982246103705, 0.4524937450811813,
        0.5475062549188187, 0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
        0.8777022041775015, 0.9328156011939159, 0.9722875115366163, 0.9947004674958250};
    static const double weights[] = {
        0.0135762297058770, 0.0311267619693239, 0.0475792558412464, 0.0623144856277669,
        0.0747979944082884, 0.0845782596975013, 0.0913017075224618, 0.0947253052275342,
        0.0947253052275342, 0.0913017075224618, 0.0845782596975013, 0.0747979944082884,
        0.0623144856277669, 0.0475792558412464, 0.0311267619693239, 0.0135762297058770};
    const double upper = std::asin(rho);
    double integral = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double t = upper * nodes[i];
        const double cos_t = std::cos(t);
        const double expo = -(x * x - 2.0 * x * y * std::sin(t) + y * y) / (2.0 * cos_t * cos_t);
        integral += weights[i] * std::exp(expo);
    }
    integral *= upper / (2.0 * M_PI);
    return standard_normal_cdf(x) * standard_normal_cdf(y) + integral;
}

double Copula::cdf(const Eigen::VectorXd& u) const {
    if (u.size() != dimension_) throw std::invalid_argument("cdf: point has wrong dimension");
    for (Eigen::Index i = 0; i < u.size(); ++i) check_unit_closed(u(i), "copula cdf argument");
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (u(i) == 0.0) return 0.0;

    switch (family_) {
        case CopulaFamily::independent:
            return u.prod();
        case CopulaFamily::bivariate_logistic: {
            const double u1 = u(0), u2 = u(1);
            // Uniform margins hold exactly: C(u, 1) = u.
            if (u2 == 1.0) return u1;
            if (u1 == 1.0) return u2;
            return u1 * u2 / (u1 + u2 - u1 * u2);
        }
        case CopulaFamily::gaussian: {
            // Coordinates at 1 marginalize out; what remains must be <= 2-d.
            std::vector<double> interior;
            for (Eigen::Index i = 0; i < u.size(); ++i)
                if (u(i) < 1.0) interior.push_back(u(i));
            if (interior.size() > 2 ||
                (interior.size() == 2 && dimension_ > 2))
                throw std::invalid_argument(
                    "gaussian copula cdf supports at most two non-unit coordinates (K <= 2)");
            if (interior.empty()) return 1.0;
            if (interior.size() == 1) return interior[0];
            if (corr_(0, 1) == 0.0) return interior[0] * interior[1];  // exact independence
            const double y1 = standard_normal_quantile(interior[0]);
            const double y2 = standard_normal_quantile(interior[1]);
            return bivariate_normal_cdf(y1, y2, corr_(0, 1));
        }
    }
    return 0.0;
}

double Copula::log_density(const Eigen::VectorXd& u) const {
    if (u.size() != dimension_) throw std::invalid_argument("log_density: wrong dimension");
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (!(u(i) > 0.0 && u(i) < 1.0))
            throw std::domain_error("copula density requires an interior point");

    switch (family_) {
        case CopulaFamily::independent:
            return 0.0;
        case CopulaFamily::bivariate_logistic: {
            const double u1 = u(0), u2 = u(1);
            return std::log(2.0 * u1 * u2) - 3.0 * std::log(u1 + u2 - u1 * u2);
        }
        case CopulaFamily::gaussian: {
            Eigen::VectorXd y(dimension_);
            for (int i = 0; i < dimension_; ++i) y(i) = standard_normal_quantile(u(i));
            const Eigen::VectorXd half = corr_llt_.matrixL().solve(y);
            return -0.5 * corr_log_det_ - 0.5 * (half.squaredNorm() - y.squaredNorm());
        }
    }
    return 0.0;
}

Copula Copula::permuted(const std::vector<int>& ordering) const {
    if (static_cast<int>(ordering.size()) != dimension_)
        throw std::invalid_argument("ordering length must equal the copula dimension");
    std::vector<bool> seen(ordering.size(), false);
    for (int idx : ordering) {
        if (idx < 0 || idx >= dimension_ || seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("ordering is not a permutation");
        seen[static_cast<std::size_t>(idx)] = true;
    }
    if (family_ != CopulaFamily::gaussian) return *this;  // exchangeable families
    Eigen::MatrixXd corr(dimension_, dimension_);
    for (int a = 0; a < dimension_; ++a)
        for (int b = 0; b < dimension_; ++b)
            corr(a, b) = corr_(ordering[static_cast<std::size_t>(a)],
                               ordering[static_cast<std::size_t>(b)]);
    return gaussian(std::move(corr));
}

// ---------------------------------------------------------------------------
// ConditionalCopula
// ---------------------------------------------------------------------------

ConditionalCopula::ConditionalCopula(const Copula& parent, int k) : parent_(parent), k_(k) {
    if (k < 2 || k > parent.dimension())
        throw std::invalid_argument("conditional copula index k must be in [2, K]");
    if (parent.family() == CopulaFamily::gaussian) {
        const int m = k - 1;
        const Eigen::MatrixXd& corr = parent_.correlation();
        Eigen::LLT<Eigen::MatrixXd> llt(corr.topLeftCorner(m, m));
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("gaussian copula: leading block not positive definite");
        const Eigen::VectorXd col = corr.col(k - 1).head(m);
        w_ = llt.solve(col);
        const double var = 1.0 - w_.dot(col);
        if (!(var > 0.0))
            throw std::runtime_error("gaussian copula: nonpositive conditional variance");
        s_ = std::sqrt(var);
    }
}

double conditional_cdf(const ConditionalCopula& cc, double u_k, const Eigen::VectorXd& cond) {
    check_unit_closed(u_k, "conditional_cdf u");
    check_cond_interior(cond, cc.k_ - 1);
    switch (cc.parent_.family()) {
        case CopulaFamily::independent:
            return u_k;
        case CopulaFamily::bivariate_logistic: {
            const double u1 = cond(0);
            const double d = u1 + u_k - u1 * u_k;
            return u_k * u_k / (d * d);
        }
        case CopulaFamily::gaussian: {
            if (u_k == 0.0) return 0.0;
            if (u_k == 1.0) return 1.0;
            double m = 0.0;
            for (Eigen::Index i = 0; i < cond.size(); ++i)
                m += cc.w_(i) * standard_normal_quantile(cond(i));
            // Identity conditional (all-zero weights, unit sd) reduces to
            // Phi(Phi^-1(u)); return u itself so independence is exact.
            if (m == 0.0 && cc.s_ == 1.0) return u_k;
            return standard_normal_cdf((standard_normal_quantile(u_k) - m) / cc.s_);
        }
    }
    return 0.0;
}

double conditional_quantile(const ConditionalCopula& cc, double z, const Eigen::VectorXd& cond) {
    if (!(z > 0.0 && z < 1.0)) throw std::domain_error("conditional_quantile: z outside (0,1)");
    check_cond_interior(cond, cc.k_ - 1);
    switch (cc.parent_.family()) {
        case CopulaFamily::independent:
            return z;
        case CopulaFamily::bivariate_logistic: {
            const double u1 = cond(0);
            const double sqrt_z = std::sqrt(z);
            return u1 * sqrt_z / (1.0 - sqrt_z + u1 * sqrt_z);
        }
        case CopulaFamily::gaussian: {
            double m = 0.0;
            for (Eigen::Index i = 0; i < cond.size(); ++i)
                m += cc.w_(i) * standard_normal_quantile(cond(i));
            if (m == 0.0 && cc.s_ == 1.0) return z;
            return standard_normal_cdf(m + cc.s_ * standard_normal_quantile(z));
        }
    }
    return z;
}

double conditional_density(const ConditionalCopula& cc, double u_k, const Eigen::VectorXd& cond) {
    if (!(u_k > 0.0 && u_k < 1.0))
        throw std::domain_error("conditional_density: u outside (0,1)");
    check_cond_interior(cond, cc.k_ - 1);
    switch (cc.parent_.family()) {
        case CopulaFamily::independent:
            return 1.0;
        case CopulaFamily::bivariate_logistic: {
            const double u1 = cond(0);
            const double d = u1 + u_k - u1 * u_k;
            return 2.0 * u1 * u_k / (d * d * d);
        }
        case CopulaFamily::gaussian: {
            double m = 0.0;
            for (Eigen::Index i = 0; i < cond.size(); ++i)
                m += cc.w_(i) * standard_normal_quantile(cond(i));
            if (m == 0.0 && cc.s_ == 1.0) return 1.0;
            const double y = standard_normal_quantile(u_k);
            return standard_normal_pdf((y - m) / cc.s_) / (cc.s_ * standard_normal_pdf(y));
        }
    }
    return 1.0;
}

double numeric_conditional_quantile(const ConditionalCopula& cc, double z,
                                    const Eigen::VectorXd& cond) {
    if (!(z > 0.0 && z < 1.0))
        throw std::domain_error("numeric_conditional_quantile: z outside (0,1)");
    constexpr double eps = 1e-12;
    double lo = eps, hi = 1.0 - eps;
    double f_lo = conditional_cdf(cc, lo, cond) - z;
    double f_hi = conditional_cdf(cc, hi, cond) - z;
    if (f_lo > 0.0) return lo;  // target below the representable bracket
    if (f_hi < 0.0) return hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = conditional_cdf(cc, mid, cond) - z;
        if (f_mid <= 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14) break;
    }
    if (hi - lo > 1e-6)
        throw std::runtime_error("numeric_conditional_quantile: bisection failed to converge at z=" +
                                 std::to_string(z) + ", k=" + std::to_string(cc.k()));
    double u = 0.5 * (lo + hi);
    for (int step = 0; step < 3; ++step) {
        const double density = conditional_density(cc, u, cond);
        if (!(density > 0.0) || !std::isfinite(density)) break;
        u -= (conditional_cdf(cc, u, cond) - z) / density;
        u = std::clamp(u, eps, 1.0 - eps);
    }
    return u;
}

// ---------------------------------------------------------------------------
// composition with marginals
// ---------------------------------------------------------------------------

double conditional_input_cdf(const std::vector<Marginal>& marginals, const Copula& cop, int k,
                             double x_k, const Eigen::VectorXd& x_prefix) {
    const int dim = cop.dimension();
    if (static_cast<int>(marginals.size()) != dim)
        throw std::invalid_argument("conditional_input_cdf: marginal count != copula dimension");
    if (k < 1 || k > dim) throw std::invalid_argument("conditional_input_cdf: k out of range");
    if (x_prefix.size() != k - 1)
        throw std::invalid_argument("conditional_input_cdf: prefix length must be k-1");

    const double u_k = cdf(marginals[static_cast<std::size_t>(k - 1)], x_k);
    if (k == 1) return u_k;

    Eigen::VectorXd cond(k - 1);
    for (int i = 0; i < k - 1; ++i) {
        cond(i) = cdf(marginals[static_cast<std::size_t>(i)], x_prefix(i));
        if (!(cond(i) > 0.0 && cond(i) < 1.0))
            throw std::domain_error("conditional_input_cdf: prefix on the support boundary");
    }
    return conditional_cdf(ConditionalCopula(cop, k), u_k, cond);
}

double clamp_unit_interior(double u, ClampStats& stats) {
    if (u < kUnitClampEps) {
        ++stats.clamped;
        return kUnitClampEps;
    }
    if (u > 1.0 - kUnitClampEps) {
        ++stats.clamped;
        return 1.0 - kUnitClampEps;
    }
    return u;
}

} // namespace lhsd
