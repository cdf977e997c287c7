#include "lhsd/joint_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lhsd {

const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::independent: return "independent";
        case ModelKind::mvn: return "mvn";
        case ModelKind::copula: return "copula";
    }
    return "?";
}

namespace {

std::vector<int> identity_ordering(int k) {
    std::vector<int> ord(static_cast<std::size_t>(k));
    std::iota(ord.begin(), ord.end(), 0);
    return ord;
}

std::vector<std::string> default_names(int k) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

void check_permutation(const std::vector<int>& ordering, int k) {
    if (static_cast<int>(ordering.size()) != k)
        throw std::invalid_argument("ordering length must equal the model dimension");
    std::vector<bool> seen(ordering.size(), false);
    for (int idx : ordering) {
        if (idx < 0 || idx >= k || seen[static_cast<std::size_t>(idx)])
            throw std::invalid_argument("ordering is not a permutation");
        seen[static_cast<std::size_t>(idx)] = true;
    }
}

} // namespace

JointModel::JointModel(ModelKind kind, std::vector<Marginal> marginals,
                       std::optional<MvnSpec> spec, std::optional<Copula> cop,
                       std::vector<std::string> names, std::vector<int> ordering)
    : kind_(kind),
      marginals_(std::move(marginals)),
      spec_(std::move(spec)),
      copula_(std::move(cop)),
      names_(std::move(names)),
      ordering_(std::move(ordering)) {
    if (marginals_.empty()) throw std::invalid_argument("joint model needs at least one component");
    const int k = dimension();
    if (static_cast<int>(names_.size()) != k)
        throw std::invalid_argument("component name count must equal the dimension");
    check_permutation(ordering_, k);
    rebuild_chain();
}

JointModel JointModel::independent(std::vector<Marginal> marginals) {
    const int k = static_cast<int>(marginals.size());
    return JointModel(ModelKind::independent, std::move(marginals), std::nullopt, std::nullopt,
                      default_names(k), identity_ordering(k));
}

JointModel JointModel::mvn(MvnSpec spec) {
    const int k = spec.dimension();
    std::vector<Marginal> marginals;
    marginals.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        marginals.push_back(Marginal::normal(spec.mu(i), std::sqrt(spec.sigma(i, i))));
    return JointModel(ModelKind::mvn, std::move(marginals), std::move(spec), std::nullopt,
                      default_names(k), identity_ordering(k));
}

JointModel JointModel::with_copula(std::vector<Marginal> marginals, Copula cop) {
    const int k = static_cast<int>(marginals.size());
    if (cop.dimension() != k)
        throw std::invalid_argument("copula dimension must equal the marginal count");
    return JointModel(ModelKind::copula, std::move(marginals), std::nullopt, std::move(cop),
                      default_names(k), identity_ordering(k));
}

JointModel JointModel::reordered(std::vector<int> ordering) const {
    JointModel out = *this;
    check_permutation(ordering, dimension());
    out.ordering_ = std::move(ordering);
    out.rebuild_chain();
    return out;
}

JointModel JointModel::named(std::vector<std::string> names) const {
    if (static_cast<int>(names.size()) != dimension())
        throw std::invalid_argument("component name count must equal the dimension");
    JointModel out = *this;
    out.names_ = std::move(names);
    return out;
}

void JointModel::rebuild_chain() {
    const int k = dimension();
    chain_marginals_.clear();
    for (int t = 0; t < k; ++t)
        chain_marginals_.push_back(marginals_[static_cast<std::size_t>(ordering_[static_cast<std::size_t>(t)])]);

    mvn_chain_.reset();
    chain_copula_.reset();
    conditionals_.clear();

    if (kind_ == ModelKind::mvn) {
        Eigen::VectorXd mu(k);
        Eigen::MatrixXd sigma(k, k);
        for (int t = 0; t < k; ++t) {
            mu(t) = spec_->mu(ordering_[static_cast<std::size_t>(t)]);
            for (int s = 0; s < k; ++s)
                sigma(t, s) = spec_->sigma(ordering_[static_cast<std::size_t>(t)],
                                           ordering_[static_cast<std::size_t>(s)]);
        }
        mvn_chain_.emplace(MvnSpec(std::move(mu), std::move(sigma)));
    } else if (kind_ == ModelKind::copula) {
        chain_copula_ = copula_->permuted(ordering_);
        conditionals_.reserve(static_cast<std::size_t>(k - 1));
        for (int t = 1; t < k; ++t) conditionals_.emplace_back(*chain_copula_, t + 1);
    }
}

const MvnSpec& JointModel::mvn_spec() const {
    if (kind_ != ModelKind::mvn) throw std::logic_error("mvn_spec() requires an mvn model");
    return *spec_;
}

const Copula& JointModel::copula() const {
    if (kind_ != ModelKind::copula) throw std::logic_error("copula() requires a copula model");
    return *copula_;
}

const ConditionalCopula& JointModel::chain_conditional(int t) const {
    if (kind_ != ModelKind::copula)
        throw std::logic_error("chain_conditional() requires a copula model");
    if (t < 1 || t >= dimension()) throw std::invalid_argument("chain position out of range");
    return conditionals_[static_cast<std::size_t>(t - 1)];
}

double JointModel::chain_quantile(int t, double z, const Eigen::VectorXd& x_prefix,
                                  ClampStats* clamp) const {
    if (t < 0 || t >= dimension()) throw std::invalid_argument("chain position out of range");
    if (x_prefix.size() < t) throw std::invalid_argument("chain prefix too short");
    switch (kind_) {
        case ModelKind::independent:
            return quantile(chain_marginals_[static_cast<std::size_t>(t)], z);
        case ModelKind::mvn:
            return mvn_chain_->quantile(t, z, x_prefix);
        case ModelKind::copula: {
            const Marginal& m = chain_marginals_[static_cast<std::size_t>(t)];
            if (t == 0) return quantile(m, z);
            ClampStats local;
            ClampStats& stats = clamp ? *clamp : local;
            Eigen::VectorXd cond(t);
            for (int i = 0; i < t; ++i)
                cond(i) = clamp_unit_interior(
                    cdf(chain_marginals_[static_cast<std::size_t>(i)], x_prefix(i)), stats);
            if (!(z > 0.0 && z < 1.0)) {
                if (z == 0.0 || z == 1.0)
                    return quantile(m, z);  // support endpoint, any conditioning
                throw std::domain_error("chain_quantile: z outside [0,1]");
            }
            const double u = conditional_quantile(chain_conditional(t), z, cond);
            return quantile(m, u);
        }
    }
    return 0.0;
}

double JointModel::chain_cdf(int t, double x, const Eigen::VectorXd& x_prefix,
                             ClampStats* clamp) const {
    if (t < 0 || t >= dimension()) throw std::invalid_argument("chain position out of range");
    if (x_prefix.size() < t) throw std::invalid_argument("chain prefix too short");
    switch (kind_) {
        case ModelKind::independent:
            return cdf(chain_marginals_[static_cast<std::size_t>(t)], x);
        case ModelKind::mvn:
            return mvn_chain_->cdf(t, x, x_prefix);
        case ModelKind::copula: {
            const double u = cdf(chain_marginals_[static_cast<std::size_t>(t)], x);
            if (t == 0) return u;
            ClampStats local;
            ClampStats& stats = clamp ? *clamp : local;
            Eigen::VectorXd cond(t);
            for (int i = 0; i < t; ++i)
                cond(i) = clamp_unit_interior(
                    cdf(chain_marginals_[static_cast<std::size_t>(i)], x_prefix(i)), stats);
            return conditional_cdf(chain_conditional(t), u, cond);
        }
    }
    return 0.0;
}

double JointModel::log_density(const Eigen::VectorXd& x, ClampStats* clamp) const {
    const int k = dimension();
    if (x.size() != k) throw std::invalid_argument("log_density: point has wrong dimension");
    switch (kind_) {
        case ModelKind::independent: {
            double sum = 0.0;
            for (int i = 0; i < k; ++i) sum += log_pdf(marginals_[static_cast<std::size_t>(i)], x(i));
            return sum;
        }
        case ModelKind::mvn:
            return mvn_chain_->log_density([&] {
                Eigen::VectorXd xc(k);
                for (int t = 0; t < k; ++t) xc(t) = x(ordering_[static_cast<std::size_t>(t)]);
                return xc;
            }());
        case ModelKind::copula: {
            double sum = 0.0;
            Eigen::VectorXd u(k);
            ClampStats local;
            ClampStats& stats = clamp ? *clamp : local;
            for (int i = 0; i < k; ++i) {
                const Marginal& m = marginals_[static_cast<std::size_t>(i)];
                const double lp = log_pdf(m, x(i));
                if (lp == -std::numeric_limits<double>::infinity()) return lp;
                sum += lp;
                u(i) = clamp_unit_interior(cdf(m, x(i)), stats);
            }
            return sum + copula_->log_density(u);
        }
    }
    return 0.0;
}

} // namespace lhsd
