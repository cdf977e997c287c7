#include "lhsd/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace lhsd {

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::srs: return "srs";
        case Scheme::lhs_ind: return "lhs_ind";
        case Scheme::lhsd: return "lhsd";
        case Scheme::lhsd_c: return "lhsd_c";
        case Scheme::lhsd_copula: return "lhsd_copula";
        case Scheme::lhs_rank: return "lhs_rank";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "srs") return Scheme::srs;
    if (name == "lhs_ind") return Scheme::lhs_ind;
    if (name == "lhsd") return Scheme::lhsd;
    if (name == "lhsd_c") return Scheme::lhsd_c;
    if (name == "lhsd_copula") return Scheme::lhsd_copula;
    if (name == "lhs_rank") return Scheme::lhs_rank;
    throw std::invalid_argument("unknown scheme: " + name);
}

bool scheme_uses_design(Scheme s) { return s != Scheme::srs && s != Scheme::lhs_rank; }

namespace {

/// Uniform draw on the open interval (0,1); rejects the exact zero that
/// uniform01 can (with probability 2^-53) produce.
double uniform_open(RngStream& rng) {
    double u;
    do {
        u = rng.uniform01();
    } while (u == 0.0);
    return u;
}

void check_sample_args(const JointModel& model, int n) {
    (void)model;
    if (n < 1) throw std::invalid_argument("sample size must be positive");
}

} // namespace

SampleMatrix sample_srs(const JointModel& model, int n, RngStream rng) {
    check_sample_args(model, n);
    const int k = model.dimension();
    SampleMatrix out;
    out.scheme = Scheme::srs;
    out.seed = rng.key();
    out.ordering = model.ordering();
    out.x.resize(n, k);

    ClampStats clamp;
    if (model.kind() == ModelKind::copula) {
        Eigen::VectorXd u(k);
        for (int j = 0; j < n; ++j) {
            for (int t = 0; t < k; ++t) {
                const double v = uniform_open(rng);
                if (t == 0)
                    u(0) = v;
                else
                    u(t) = clamp_unit_interior(
                        conditional_quantile(model.chain_conditional(t), v, u.head(t)), clamp);
                out.x(j, model.ordering()[static_cast<std::size_t>(t)]) =
                    quantile(model.chain_marginal(t), u(t));
            }
        }
    } else {
        Eigen::VectorXd prefix(k);
        for (int j = 0; j < n; ++j) {
            for (int t = 0; t < k; ++t) {
                prefix(t) = model.chain_quantile(t, uniform_open(rng), prefix.head(t));
                out.x(j, model.ordering()[static_cast<std::size_t>(t)]) = prefix(t);
            }
        }
    }
    out.clamped = clamp.clamped;
    return out;
}

SampleMatrix sample_lhs_independent(const std::vector<Marginal>& marginals, int n, DesignMode mode,
                                    RngStream rng) {
    if (marginals.empty()) throw std::invalid_argument("need at least one marginal");
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    const int k = static_cast<int>(marginals.size());
    SampleMatrix out;
    out.scheme = Scheme::lhs_ind;
    out.mode = mode;
    out.seed = rng.key();
    out.ordering.resize(static_cast<std::size_t>(k));
    std::iota(out.ordering.begin(), out.ordering.end(), 0);
    out.design = generate_design(n, k, mode, rng);
    out.x.resize(n, k);
    for (int col = 0; col < k; ++col)
        for (int j = 0; j < n; ++j)
            out.x(j, col) = quantile(marginals[static_cast<std::size_t>(col)], out.design->z(j, col));
    return out;
}

SampleMatrix sample_lhs_independent(const JointModel& model, int n, DesignMode mode, RngStream rng) {
    check_sample_args(model, n);
    std::vector<Marginal> marginals;
    marginals.reserve(static_cast<std::size_t>(model.dimension()));
    for (int i = 0; i < model.dimension(); ++i) marginals.push_back(model.marginal(i));
    return sample_lhs_independent(marginals, n, mode, rng);
}

SampleMatrix sample_lhsd(const JointModel& model, int n, DesignMode mode, RngStream rng) {
    check_sample_args(model, n);
    if (!model.is_chain())
        throw std::invalid_argument("sample_lhsd requires a chain model; use the copula sampler");
    const int k = model.dimension();
    SampleMatrix out;
    out.scheme = mode == DesignMode::centered ? Scheme::lhsd_c : Scheme::lhsd;
    out.mode = mode;
    out.seed = rng.key();
    out.ordering = model.ordering();
    out.design = generate_design(n, k, mode, rng);
    out.x.resize(n, k);

    Eigen::VectorXd prefix(k);
    for (int j = 0; j < n; ++j) {
        for (int t = 0; t < k; ++t) {
            try {
                prefix(t) = model.chain_quantile(t, out.design->z(j, t), prefix.head(t));
            } catch (const std::exception& e) {
                throw std::runtime_error("lhsd sample failed at row " + std::to_string(j) +
                                         ", component " + std::to_string(t + 1) + ": " + e.what());
            }
            out.x(j, model.ordering()[static_cast<std::size_t>(t)]) = prefix(t);
        }
    }
    return out;
}

SampleMatrix sample_lhsd_copula(const JointModel& model, int n, DesignMode mode, RngStream rng) {
    check_sample_args(model, n);
    if (model.kind() != ModelKind::copula)
        throw std::invalid_argument("sample_lhsd_copula requires a copula model");
    const int k = model.dimension();
    SampleMatrix out;
    out.scheme = Scheme::lhsd_copula;
    out.mode = mode;
    out.seed = rng.key();
    out.ordering = model.ordering();
    out.design = generate_design(n, k, mode, rng);
    out.x.resize(n, k);

    ClampStats clamp;
    Eigen::VectorXd u(k);
    for (int j = 0; j < n; ++j) {
        for (int t = 0; t < k; ++t) {
            try {
                if (t == 0)
                    u(0) = out.design->z(j, 0);
                else
                    u(t) = clamp_unit_interior(
                        conditional_quantile(model.chain_conditional(t), out.design->z(j, t),
                                             u.head(t)),
                        clamp);
            } catch (const std::exception& e) {
                throw std::runtime_error("copula lhsd sample failed at row " + std::to_string(j) +
                                         ", component " + std::to_string(t + 1) + ": " + e.what());
            }
            out.x(j, model.ordering()[static_cast<std::size_t>(t)]) =
                quantile(model.chain_marginal(t), u(t));
        }
    }
    out.clamped = clamp.clamped;
    return out;
}

SampleMatrix sample_lhs_rank(const JointModel& model, int n, RngStream rng) {
    check_sample_args(model, n);
    const int k = model.dimension();
    const SampleMatrix lhs = sample_lhs_independent(model, n, DesignMode::jittered, rng.child(0));
    const SampleMatrix ref = sample_srs(model, n, rng.child(1));

    SampleMatrix out;
    out.scheme = Scheme::lhs_rank;
    out.seed = rng.key();
    out.ordering = model.ordering();
    out.x.resize(n, k);

    std::vector<int> idx(static_cast<std::size_t>(n));
    std::vector<int> rank(static_cast<std::size_t>(n));
    std::vector<double> sorted_col(static_cast<std::size_t>(n));
    for (int col = 0; col < k; ++col) {
        // rank[j] = position of ref(j, col) in the sorted reference column
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return ref.x(a, col) < ref.x(b, col); });
        for (int r = 0; r < n; ++r) rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(r)])] = r;

        for (int j = 0; j < n; ++j) sorted_col[static_cast<std::size_t>(j)] = lhs.x(j, col);
        std::sort(sorted_col.begin(), sorted_col.end());
        for (int j = 0; j < n; ++j)
            out.x(j, col) = sorted_col[static_cast<std::size_t>(rank[static_cast<std::size_t>(j)])];
    }
    return out;
}

SampleMatrix sample(const JointModel& model, Scheme scheme, int n, DesignMode mode, RngStream rng) {
    switch (scheme) {
        case Scheme::srs: {
            SampleMatrix out = sample_srs(model, n, rng);
            out.mode = mode;
            return out;
        }
        case Scheme::lhs_ind:
            return sample_lhs_independent(model, n, mode, rng);
        case Scheme::lhsd:
        case Scheme::lhsd_c: {
            const DesignMode effective = scheme == Scheme::lhsd_c ? DesignMode::centered : mode;
            SampleMatrix out = model.is_chain() ? sample_lhsd(model, n, effective, rng)
                                                : sample_lhsd_copula(model, n, effective, rng);
            out.scheme = scheme;
            return out;
        }
        case Scheme::lhsd_copula:
            return sample_lhsd_copula(model, n, mode, rng);
        case Scheme::lhs_rank: {
            SampleMatrix out = sample_lhs_rank(model, n, rng);
            out.mode = mode;
            return out;
        }
    }
    throw std::invalid_argument("unknown scheme");
}

} // namespace lhsd
