#ifndef LHSD_DIAGNOSTICS_HPP
#define LHSD_DIAGNOSTICS_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lhsd/copula.hpp"
#include "lhsd/sampler.hpp"

namespace lhsd {

/// Log density evaluator of the target law at one point.
using LogDensity = std::function<double(const Eigen::VectorXd&)>;

/// KL divergence estimate of the sample's law from the target density f:
/// KL = \int f_n log f_n - \int f_n log f, the first term from a
/// nearest-neighbor entropy estimate, the second from the sample mean of
/// log f.
struct KlReport {
    double kl_hat = 0.0;
    double entropy_hat = 0.0;  // nearest-neighbor estimate of -int f_n log f_n
    double cross_term = 0.0;   // mean log f over the sample
    int k_entropy = 0;
    long long jittered_duplicates = 0;  // duplicate rows perturbed before the NN search
};

double digamma(double x);

/// Kozachenko-Leonenko entropy estimate with the k-th nearest neighbor in the
/// Euclidean metric: H = psi(n) - psi(k) + log c_d + (d/n) sum_i log eps_i.
/// Duplicate rows (zero NN distance) are perturbed by 1e-12 and counted.
double kl_entropy(const Eigen::MatrixXd& x, int k_entropy, long long* jittered = nullptr);

KlReport kl_divergence(const Eigen::MatrixXd& x, const LogDensity& log_f, int k_entropy = 3);
KlReport kl_divergence(const SampleMatrix& s, const LogDensity& log_f, int k_entropy = 3);

// ---------------------------------------------------------------------------
// correlation tables
// ---------------------------------------------------------------------------

/// Streaming bias/MSE of pairwise Pearson correlations across replications.
class CorrelationAccumulator {
  public:
    explicit CorrelationAccumulator(int dim);

    /// Add one replication (an n x dim sample). Throws std::runtime_error on
    /// a constant column (undefined correlation).
    void add(const Eigen::MatrixXd& x);

    int replications() const { return reps_; }
    int dim() const { return dim_; }
    /// Mean of the sample correlation over replications, per pair.
    double mean_corr(int i, int j) const;
    /// Mean squared deviation from a target value, per pair.
    double mse_against(int i, int j, double target) const;

  private:
    int dim_;
    int reps_ = 0;
    Eigen::MatrixXd sum_corr_;
    Eigen::MatrixXd sum_corr_sq_;
};

struct CorrelationReport {
    struct Row {
        int i = 0;  // 1-based component labels
        int j = 0;
        double rho_target = 0.0;
        double mean_corr = 0.0;
        double bias = 0.0;
        double mse = 0.0;
    };
    std::vector<Row> pairs;        // the targeted pairs, in input order
    double max_abs_other_bias = 0.0;  // aggregate over all non-targeted pairs
    double max_other_mse = 0.0;
    int replications = 0;
};

/// Bias and MSE of the targeted pair correlations across replications;
/// non-targeted pairs (true rho = 0) are aggregated by maximum magnitude.
/// Requires at least 2 replications.
CorrelationReport correlation_table(const CorrelationAccumulator& acc,
                                    const std::vector<PairCorrelation>& targets);

} // namespace lhsd

#endif
