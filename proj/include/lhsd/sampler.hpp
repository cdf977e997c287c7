#ifndef LHSD_SAMPLER_HPP
#define LHSD_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lhsd/joint_model.hpp"
#include "lhsd/rng.hpp"
#include "lhsd/strata.hpp"

namespace lhsd {

enum class Scheme {
    srs,          // i.i.d. draws from the joint law
    lhs_ind,      // per-marginal LHS ignoring dependence
    lhsd,         // dependence-respecting LHS via the conditional chain
    lhsd_c,       // lhsd with centered (midpoint) strata
    lhsd_copula,  // the u-space conditional-copula chain, explicitly
    lhs_rank,     // rank-matched LHS baseline (reference-sample ranks)
};

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);
bool scheme_uses_design(Scheme s);

/// A realized n x K sample. Columns follow the model's declared component
/// order regardless of the chain ordering used to draw them. For LHS-family
/// schemes, `design` holds the generating stratified design (its column t
/// feeds chain position t).
struct SampleMatrix {
    Eigen::MatrixXd x;
    Scheme scheme = Scheme::srs;
    DesignMode mode = DesignMode::jittered;
    std::uint64_t seed = 0;  // key of the stream the sample was drawn from
    std::vector<int> ordering;
    std::optional<Design> design;
    long long clamped = 0;  // interior clamps during conditional composition

    int n() const { return static_cast<int>(x.rows()); }
    int dim() const { return static_cast<int>(x.cols()); }
};

/// i.i.d. rows from the joint law; the conditional chain applied to
/// independent uniforms (exact for every model kind).
SampleMatrix sample_srs(const JointModel& model, int n, RngStream rng);

/// Classic LHS on the marginals alone: x_jk = F_k^-1(z_jk) with a stratified
/// design. Deliberately ignores dependence (the biased comparator).
SampleMatrix sample_lhs_independent(const JointModel& model, int n, DesignMode mode, RngStream rng);
SampleMatrix sample_lhs_independent(const std::vector<Marginal>& marginals, int n, DesignMode mode,
                                    RngStream rng);

/// LHS for dependent inputs via the x-space conditional chain:
/// x_j0 = F_0^-1(z_j0), then x_jt = F_t^-1(z_jt | prefix). Requires a chain
/// model (independent or mvn kind); centered mode gives the LHSD_c variant.
SampleMatrix sample_lhsd(const JointModel& model, int n, DesignMode mode, RngStream rng);

/// LHS for dependent inputs via the copula chain: u_j0 = z_j0,
/// u_jt = C_t^-1(z_jt | u-prefix), x_jt = F_t^-1(u_jt). Requires a copula
/// model.
SampleMatrix sample_lhsd_copula(const JointModel& model, int n, DesignMode mode, RngStream rng);

/// Rank-matched baseline: draw an SRS reference sample from the joint law and
/// an independent-marginal LHS, then reorder each LHS column to match the
/// reference sample's within-column ranks.
SampleMatrix sample_lhs_rank(const JointModel& model, int n, RngStream rng);

/// Dispatch on the scheme label. `lhsd`/`lhsd_c` route to the x-space chain
/// for chain models and to the copula chain for copula models (the same
/// scheme, realized per model kind); `lhsd_c` forces centered mode.
SampleMatrix sample(const JointModel& model, Scheme scheme, int n, DesignMode mode, RngStream rng);

} // namespace lhsd

#endif
