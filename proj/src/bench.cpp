#include "lhsd/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace lhsd {

namespace {

constexpr std::uint64_t kOracleTag = 0x6f7261636c65ULL;  // stream id for the oracle draw

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Kahan compensated accumulator; aggregation must not depend on summation
/// noise when replication counts get large.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace

// ---------------------------------------------------------------------------
// integrands
// ---------------------------------------------------------------------------

double h_mvn(const Eigen::VectorXd& x) {
    if (x.size() != 4) throw std::invalid_argument("h_mvn expects a length-4 vector");
    if (x(0) == 0.0) throw std::domain_error("h_mvn undefined at x1 = 0");
    return x(0) + 0.5 * x(1) * x(2) - x(1) * std::log(std::abs(x(0))) + std::exp(0.25 * x(3));
}

double h_logistic(const Eigen::VectorXd& x) {
    if (x.size() != 2) throw std::invalid_argument("h_logistic expects a length-2 vector");
    if (x(0) == 0.0) throw std::domain_error("h_logistic undefined at x1 = 0");
    return x(0) - x(1) + x(1) * std::log(std::abs(x(0)));
}

FloodOutput flood_model(const Eigen::VectorXd& inputs) {
    if (inputs.size() != 8)
        throw std::invalid_argument("flood_model expects (Q, Ks, Zv, Zm, Hd, Cb, L, B)");
    const double q = inputs(0), ks = inputs(1), zv = inputs(2), zm = inputs(3);
    const double hd = inputs(4), cb = inputs(5), l = inputs(6), b = inputs(7);
    if (!(zm > zv)) throw std::domain_error("flood_model requires Zm > Zv");
    if (!(q > 0.0 && ks > 0.0 && l > 0.0 && b > 0.0))
        throw std::domain_error("flood_model requires positive Q, Ks, L, B");
    FloodOutput out;
    out.H = std::pow(q / (b * ks * std::sqrt((zm - zv) / l)), 0.6);
    out.S = zv + out.H - hd - cb;
    return out;
}

double h_flood(const Eigen::VectorXd& inputs) { return flood_model(inputs).S; }

Integrand integrand_by_name(const std::string& name) {
    if (name == "one") return [](const Eigen::VectorXd&) { return 1.0; };
    if (name == "sum") return [](const Eigen::VectorXd& x) { return x.sum(); };
    if (name == "interaction10")
        return [](const Eigen::VectorXd& x) {
            if (x.size() != 2) throw std::invalid_argument("interaction10 expects 2 components");
            return x(0) + x(1) + 10.0 * x(0) * x(1);
        };
    if (name == "mvn") return h_mvn;
    if (name == "logistic") return h_logistic;
    if (name == "flood") return h_flood;
    throw std::invalid_argument("unknown integrand: " + name);
}

// ---------------------------------------------------------------------------
// study models
// ---------------------------------------------------------------------------

JointModel mvn_study_model(std::uint64_t recipe_seed) {
    RngStream rng(recipe_seed);
    auto draw_normal = [&rng]() {
        double u;
        do {
            u = rng.uniform01();
        } while (u == 0.0);
        return standard_normal_quantile(u);
    };
    Eigen::VectorXd mu(4);
    for (int i = 0; i < 4; ++i) mu(i) = draw_normal();
    Eigen::MatrixXd p(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p(i, j) = draw_normal();
    return JointModel::mvn(MvnSpec(std::move(mu), p.transpose() * p));
}

JointModel logistic_study_model() {
    std::vector<Marginal> marginals = {Marginal::logistic(0.0, 1.0), Marginal::logistic(0.0, 1.0)};
    return JointModel::with_copula(std::move(marginals), Copula::bivariate_logistic());
}

const std::vector<PairCorrelation>& flood_correlation_targets() {
    static const std::vector<PairCorrelation> targets = {
        {1, 2, 0.5},  // Q, Ks
        {3, 4, 0.3},  // Zv, Zm
        {7, 8, 0.3},  // L, B
    };
    return targets;
}

JointModel flood_study_model() {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Marginal> marginals = {
        Marginal::truncated_gumbel(1013.0, 558.0, 500.0, 3000.0),  // Q
        Marginal::truncated_normal(30.0, 8.0, 15.0, inf),          // Ks
        Marginal::triangular(49.0, 50.0, 51.0),                    // Zv
        Marginal::triangular(54.0, 55.0, 56.0),                    // Zm
        Marginal::uniform(7.0, 9.0),                               // Hd
        Marginal::triangular(55.0, 55.5, 56.0),                    // Cb
        Marginal::triangular(4990.0, 5000.0, 5010.0),              // L
        Marginal::triangular(295.0, 300.0, 305.0),                 // B
    };
    Copula cop = Copula::gaussian_from_pairs(8, flood_correlation_targets());
    return JointModel::with_copula(std::move(marginals), std::move(cop))
        .named({"Q", "Ks", "Zv", "Zm", "Hd", "Cb", "L", "B"});
}

StudyDefinition make_study(const std::string& name) {
    if (name == "mvn") return {name, mvn_study_model(), h_mvn, {}};
    if (name == "logistic") return {name, logistic_study_model(), h_logistic, {}};
    if (name == "flood") return {name, flood_study_model(), h_flood, flood_correlation_targets()};
    throw std::invalid_argument("unknown study: " + name);
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

TauOracle tau_oracle(const StudyDefinition& study, long long n_oracle, std::uint64_t seed) {
    if (n_oracle < 1) throw std::invalid_argument("oracle sample size must be positive");
    RngStream root(seed);
    KahanSum sum, sum_sq;
    long long remaining = n_oracle;
    std::uint64_t block_id = 0;
    constexpr int kBlock = 262144;
    while (remaining > 0) {
        const int n = static_cast<int>(std::min<long long>(remaining, kBlock));
        const SampleMatrix s = sample_srs(study.model, n, root.child(block_id++));
        for (int j = 0; j < n; ++j) {
            const double y = study.h(s.x.row(j).transpose());
            sum.add(y);
            sum_sq.add(y * y);
        }
        remaining -= n;
    }
    TauOracle out;
    out.n = n_oracle;
    out.seed = root.key();
    out.value = sum.sum / static_cast<double>(n_oracle);
    const double var = std::max(0.0, sum_sq.sum / static_cast<double>(n_oracle) - out.value * out.value);
    out.se = std::sqrt(var / static_cast<double>(n_oracle));
    return out;
}

// ---------------------------------------------------------------------------
// run_study
// ---------------------------------------------------------------------------

StudyReport run_study(const ExperimentConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();

    if (cfg.n < 2) throw std::invalid_argument("run_study: n must be >= 2");
    if (cfg.reps < 1) throw std::invalid_argument("run_study: reps must be >= 1");
    if (cfg.schemes.empty()) throw std::invalid_argument("run_study: schemes must be nonempty");

    StudyDefinition def = [&cfg]() -> StudyDefinition {
        if (cfg.study == "custom") {
            if (!cfg.custom_model) throw std::invalid_argument("custom study needs a model");
            if (cfg.integrand.empty())
                throw std::invalid_argument("custom study needs an integrand name");
            return {"custom", *cfg.custom_model, integrand_by_name(cfg.integrand), {}};
        }
        return make_study(cfg.study);
    }();
    if (!cfg.ordering.empty()) def.model = def.model.reordered(cfg.ordering);

    const Integrand rep_h = cfg.h_override ? cfg.h_override : def.h;
    const int knn = cfg.knn_k > 0 ? cfg.knn_k : default_knn_k(cfg.n);

    StudyReport report;
    report.study = def.name;
    report.n = cfg.n;
    report.reps = cfg.reps;
    report.seed = cfg.seed;
    report.knn_k = knn;
    report.k_entropy = cfg.k_entropy;
    report.ci_level = cfg.ci_level;

    RngStream root(cfg.seed);
    const RngStream study_stream = root.child(fnv1a(def.name));
    report.oracle = tau_oracle(def, cfg.oracle_n, root.child(kOracleTag).key());
    const double tau0 = report.oracle.value;

    const LogDensity log_f = [&def](const Eigen::VectorXd& x) { return def.model.log_density(x); };
    const double sqrt_n = std::sqrt(static_cast<double>(cfg.n));
    const long long max_failures =
        static_cast<long long>(0.001 * static_cast<double>(cfg.reps) *
                               static_cast<double>(cfg.schemes.size()));
    long long total_failed = 0;

    for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
        const Scheme scheme = cfg.schemes[si];
        const RngStream scheme_stream = study_stream.child(static_cast<std::uint64_t>(scheme));

        SchemeSummary sm;
        sm.scheme = scheme;
        sm.tau_draws.reserve(static_cast<std::size_t>(cfg.reps));

        KahanSum dev_sum, dev_sq_sum;          // tau_hat - tau0 moments
        KahanSum nvar_lhsd_sum, nvar_srs_sum;  // theory-formula estimates
        KahanSum kl_sum, kl_sq_sum;
        long long covered = 0;
        CorrelationAccumulator corr_acc(std::max(2, def.model.dimension()));

        for (int rep = 0; rep < cfg.reps; ++rep) {
            try {
                const RngStream rep_stream = scheme_stream.child(static_cast<std::uint64_t>(rep));
                const SampleMatrix s =
                    sample(def.model, scheme, cfg.n, DesignMode::jittered, rep_stream);
                const EstimateReport est =
                    estimate_report(def.model, s, rep_h, knn, cfg.ci_level);

                const double dev = est.tau_hat - tau0;
                dev_sum.add(dev);
                dev_sq_sum.add(dev * dev);
                nvar_lhsd_sum.add(est.var_lhsd_hat);
                nvar_srs_sum.add(est.var_srs_hat);
                if (est.ci.lo <= tau0 && tau0 <= est.ci.hi) ++covered;
                sm.clamped += est.clamped;
                sm.tau_draws.push_back(est.tau_hat);

                if (cfg.with_kl) {
                    const KlReport kl = kl_divergence(s.x, log_f, cfg.k_entropy);
                    kl_sum.add(kl.kl_hat);
                    kl_sq_sum.add(kl.kl_hat * kl.kl_hat);
                }
                if (cfg.with_correlations && def.model.dimension() >= 2) corr_acc.add(s.x);
                ++sm.completed;
            } catch (const std::exception& e) {
                ++sm.failed;
                ++total_failed;
                report.failures.push_back({scheme_name(scheme), rep, e.what()});
                if (total_failed > max_failures)
                    throw std::runtime_error(
                        "study aborted: " + std::to_string(total_failed) +
                        " failed replications exceed the 0.1% budget; first failure: " +
                        report.failures.front().message);
            }
        }

        if (sm.completed > 0) {
            const double inv = 1.0 / static_cast<double>(sm.completed);
            const double mean_dev = dev_sum.sum * inv;
            const double mean_dev_sq = dev_sq_sum.sum * inv;
            sm.mean_tau = tau0 + mean_dev;
            sm.bias = sqrt_n * mean_dev;
            sm.mse = static_cast<double>(cfg.n) * mean_dev_sq;
            sm.variance = static_cast<double>(cfg.n) * (mean_dev_sq - mean_dev * mean_dev);
            sm.coverage = static_cast<double>(covered) * inv;
            sm.mean_nvar_lhsd_hat = static_cast<double>(cfg.n) * nvar_lhsd_sum.sum * inv;
            sm.mean_nvar_srs_hat = static_cast<double>(cfg.n) * nvar_srs_sum.sum * inv;
            if (cfg.with_kl) {
                sm.has_kl = true;
                sm.kl_mean = kl_sum.sum * inv;
                sm.kl_var = kl_sq_sum.sum * inv - sm.kl_mean * sm.kl_mean;
            }
        }
        if (cfg.with_correlations && corr_acc.replications() >= 2)
            sm.corr = correlation_table(corr_acc, def.corr_targets);

        report.schemes.push_back(std::move(sm));
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

} // namespace lhsd
