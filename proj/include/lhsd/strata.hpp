#ifndef LHSD_STRATA_HPP
#define LHSD_STRATA_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lhsd/rng.hpp"

namespace lhsd {

enum class DesignMode { jittered, centered };

const char* design_mode_name(DesignMode mode);
DesignMode design_mode_from_name(const std::string& name);

/// N x K matrix whose columns are independent random permutations of {1..N}.
struct PermutationMatrix {
    Eigen::MatrixXi p;

    int rows() const { return static_cast<int>(p.rows()); }
    int cols() const { return static_cast<int>(p.cols()); }
};

/// Stratified-uniform design: every column places exactly one point in each of
/// the N equal-width bins of [0,1). This is the z-matrix every LHS variant is
/// built from.
struct Design {
    int n = 0;
    int k = 0;
    Eigen::MatrixXd z;  // n x k, values in [0,1)
    DesignMode mode = DesignMode::jittered;
    std::uint64_t seed = 0;  // stream key the design was drawn from
};

/// Result of checking the one-point-per-stratum property column by column.
struct StratificationCertificate {
    bool valid = false;
    Eigen::MatrixXi bin_counts;          // n x k, hits per (bin, column)
    std::vector<std::pair<int, int>> violations;  // (column, bin) with count != 1, 0-based
};

PermutationMatrix random_permutations(int n, int k, RngStream rng);

/// Draw an n x k stratified-uniform design.
///
/// Column j of the design is ((p_j - 1) + u_j) / n with p_j a random
/// permutation of {1..n} and u_j i.i.d. uniforms on [0,1) (jittered mode) or
/// the constant 1/2 (centered mode). Writing the stratum offset as p-1 plus a
/// half-open uniform draws from the same distribution as (p - u)/n with
/// u ~ U(0,1) while guaranteeing z < p/n, so z = 1 can never occur.
///
/// Each column uses its own substream of `rng`, keyed by column index.
Design generate_design(int n, int k, DesignMode mode, RngStream rng);

/// Rebuild the centered design determined by a permutation matrix alone.
Design centered_design_from_permutations(const PermutationMatrix& perm);

/// Check that every column of the design occupies every 1/n-width bin exactly
/// once; any matrix of values in [0,1) can be checked, not just Designs.
StratificationCertificate stratification_certificate(const Eigen::Ref<const Eigen::MatrixXd>& z);
StratificationCertificate stratification_certificate(const Design& d);

} // namespace lhsd

#endif
