#ifndef LHSD_IO_HPP
#define LHSD_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "lhsd/bench.hpp"
#include "lhsd/estimate.hpp"
#include "lhsd/joint_model.hpp"
#include "lhsd/sampler.hpp"

namespace lhsd {

/// Shortest text keeping the value bit-exact on read-back (%.17g).
std::string format_double(double v);

// ---------------------------------------------------------------------------
// configs
// ---------------------------------------------------------------------------

/// Build a model from its JSON description. Two layouts:
///   {"components": [{"name", "family", "params": {...}}, ...],
///    "copula": {"family": "gaussian", "pairs": [{"i","j","rho"}]
///               | "correlation": [[...]]}}
///   {"mvn": {"mu": [...], "sigma": [[...]]}, "names": [...]}
/// plus an optional 1-based "ordering" permutation in either layout.
/// Truncation bounds may be omitted for one-sided truncation.
JointModel model_from_json(const nlohmann::json& j);
JointModel load_model(const std::string& path);

/// Experiment description: study/n/reps/schemes/seed plus optional knn_k,
/// k_entropy, ordering (1-based), oracle_n, ci_level, kl, correlations, and
/// for custom studies an inline "model" and "integrand" name.
ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment(const std::string& path);

// ---------------------------------------------------------------------------
// samples and designs
// ---------------------------------------------------------------------------

/// CSV with the component names as header and one row per sample point.
void write_sample_csv(const SampleMatrix& s, const std::vector<std::string>& names,
                      const std::string& path);

/// JSON sidecar: scheme, seed, mode, ordering (1-based), n, k, names, clamped.
void write_sample_sidecar(const SampleMatrix& s, const std::vector<std::string>& names,
                          const std::string& path);

/// Long-format design CSV (columns j,k,z; 1-based indices) with full-precision
/// z values, and its bit-exact reader.
void write_design_csv(const Design& d, const std::string& path);
Design read_design_csv(const std::string& path);

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

nlohmann::json estimate_report_to_json(const EstimateReport& rep);
nlohmann::json study_report_to_json(const StudyReport& rep);

/// Write report.json, table.csv, density.csv, and (when populated) kl.csv and
/// corr.csv under out_dir (created if missing).
void write_study_outputs(const StudyReport& rep, const std::string& out_dir);

} // namespace lhsd

#endif
