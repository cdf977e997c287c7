#include "lhsd/strata.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lhsd {

const char* design_mode_name(DesignMode mode) {
    return mode == DesignMode::centered ? "centered" : "jittered";
}

DesignMode design_mode_from_name(const std::string& name) {
    if (name == "jittered") return DesignMode::jittered;
    if (name == "centered") return DesignMode::centered;
    throw std::invalid_argument("unknown design mode: " + name);
}

PermutationMatrix random_permutations(int n, int k, RngStream rng) {
    if (n < 1 || k < 1) throw std::invalid_argument("permutation matrix dimensions must be positive");
    PermutationMatrix out;
    out.p.resize(n, k);
    for (int col = 0; col < k; ++col) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(col));
        for (int j = 0; j < n; ++j) out.p(j, col) = j + 1;
        // Fisher-Yates
        for (int j = n - 1; j > 0; --j) {
            const int swap_with = static_cast<int>(stream.below(static_cast<std::uint64_t>(j) + 1));
            std::swap(out.p(j, col), out.p(swap_with, col));
        }
    }
    return out;
}

Design generate_design(int n, int k, DesignMode mode, RngStream rng) {
    if (n < 1 || k < 1) throw std::invalid_argument("design dimensions must be positive");
    Design d;
    d.n = n;
    d.k = k;
    d.mode = mode;
    d.seed = rng.key();
    d.z.resize(n, k);
    const double nn = static_cast<double>(n);
    for (int col = 0; col < k; ++col) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(col));
        std::vector<int> perm(n);
        for (int j = 0; j < n; ++j) perm[j] = j + 1;
        for (int j = n - 1; j > 0; --j) {
            const int swap_with = static_cast<int>(stream.below(static_cast<std::uint64_t>(j) + 1));
            std::swap(perm[j], perm[swap_with]);
        }
        for (int j = 0; j < n; ++j) {
            double u = 0.5;
            if (mode == DesignMode::jittered) {
                // Reject the (2^-53-probability) exact zero so z stays strictly
                // interior; unbounded quantiles downstream need z > 0.
                do {
                    u = stream.uniform01();
                } while (u == 0.0);
            }
            d.z(j, col) = (static_cast<double>(perm[j] - 1) + u) / nn;
        }
    }
    return d;
}

Design centered_design_from_permutations(const PermutationMatrix& perm) {
    Design d;
    d.n = perm.rows();
    d.k = perm.cols();
    d.mode = DesignMode::centered;
    d.z.resize(d.n, d.k);
    const double nn = static_cast<double>(d.n);
    for (int col = 0; col < d.k; ++col)
        for (int j = 0; j < d.n; ++j)
            d.z(j, col) = (static_cast<double>(perm.p(j, col)) - 0.5) / nn;
    return d;
}

StratificationCertificate stratification_certificate(const Eigen::Ref<const Eigen::MatrixXd>& z) {
    const int n = static_cast<int>(z.rows());
    const int k = static_cast<int>(z.cols());
    StratificationCertificate cert;
    cert.bin_counts = Eigen::MatrixXi::Zero(n, k);
    for (int col = 0; col < k; ++col) {
        for (int j = 0; j < n; ++j) {
            const double v = z(j, col);
            if (!(v >= 0.0 && v < 1.0)) {
                cert.violations.emplace_back(col, -1);  // out of [0,1)
                continue;
            }
            const int bin = static_cast<int>(std::floor(v * n));
            cert.bin_counts(bin, col) += 1;
        }
        for (int bin = 0; bin < n; ++bin)
            if (cert.bin_counts(bin, col) != 1) cert.violations.emplace_back(col, bin);
    }
    cert.valid = cert.violations.empty();
    return cert;
}

StratificationCertificate stratification_certificate(const Design& d) {
    return stratification_certificate(d.z);
}

} // namespace lhsd
