#ifndef LHSD_JOINT_MODEL_HPP
#define LHSD_JOINT_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lhsd/copula.hpp"
#include "lhsd/dist.hpp"

namespace lhsd {

enum class ModelKind {
    independent,  // product of marginals
    mvn,          // multivariate normal, conditional chain in x-space
    copula,       // marginals coupled by a copula, conditional chain in u-space
};

const char* model_kind_name(ModelKind k);

/// A K-dimensional joint law exposed as a chain of conditional distributions.
/// Components keep their declared order in every input/output matrix; the
/// `ordering` permutation only controls the order in which the conditional
/// chain visits them (position t samples declared component ordering[t]).
/// Immutable after construction; reordering returns a new model.
class JointModel {
  public:
    static JointModel independent(std::vector<Marginal> marginals);
    static JointModel mvn(MvnSpec spec);
    static JointModel with_copula(std::vector<Marginal> marginals, Copula cop);

    /// Same law, chain visiting components in the given 0-based order.
    JointModel reordered(std::vector<int> ordering) const;
    /// Same law with component names for CSV headers and reports.
    JointModel named(std::vector<std::string> names) const;

    ModelKind kind() const { return kind_; }
    /// True when the conditional chain runs in x-space; copula models chain
    /// in u-space instead.
    bool is_chain() const { return kind_ != ModelKind::copula; }
    int dimension() const { return static_cast<int>(marginals_.size()); }
    const std::vector<int>& ordering() const { return ordering_; }
    const std::vector<std::string>& names() const { return names_; }

    /// Marginal of declared component i (derived from mu/sigma for mvn).
    const Marginal& marginal(int i) const { return marginals_[static_cast<std::size_t>(i)]; }
    const MvnSpec& mvn_spec() const;
    const Copula& copula() const;

    /// Chain-order accessors for the u-space path (copula kind).
    const Marginal& chain_marginal(int t) const {
        return chain_marginals_[static_cast<std::size_t>(t)];
    }
    /// Conditional copula at chain position t >= 1 (copula kind only).
    const ConditionalCopula& chain_conditional(int t) const;

    /// Conditional quantile at chain position t given the chain-order prefix
    /// of realized x values: F_t^-1(z | x_0..x_{t-1}). For copula models the
    /// prefix is pushed through the marginal cdfs and clamped interior
    /// (adjustments counted in `clamp` when provided).
    double chain_quantile(int t, double z, const Eigen::VectorXd& x_prefix,
                          ClampStats* clamp = nullptr) const;
    /// Conditional cdf at chain position t: F_t(x | x_0..x_{t-1}).
    double chain_cdf(int t, double x, const Eigen::VectorXd& x_prefix,
                     ClampStats* clamp = nullptr) const;

    /// Joint log density at a declared-order point; -inf outside the support.
    double log_density(const Eigen::VectorXd& x, ClampStats* clamp = nullptr) const;

  private:
    JointModel(ModelKind kind, std::vector<Marginal> marginals, std::optional<MvnSpec> spec,
               std::optional<Copula> cop, std::vector<std::string> names,
               std::vector<int> ordering);
    void rebuild_chain();

    ModelKind kind_;
    std::vector<Marginal> marginals_;  // declared order
    std::optional<MvnSpec> spec_;      // declared order, mvn kind
    std::optional<Copula> copula_;     // declared order, copula kind
    std::vector<std::string> names_;
    std::vector<int> ordering_;  // ordering_[t] = declared index at position t

    // chain-order internals
    std::vector<Marginal> chain_marginals_;
    std::optional<MvnChain> mvn_chain_;            // mvn kind
    std::optional<Copula> chain_copula_;           // copula kind, relabeled
    std::vector<ConditionalCopula> conditionals_;  // copula kind, positions 1..K-1
};

} // namespace lhsd

#endif
