#include "lhsd/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lhsd {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

double param_or(const json& params, const char* name, double fallback) {
    if (!params.contains(name)) return fallback;
    return params.at(name).get<double>();
}

double required_param(const json& params, const char* name, const std::string& family) {
    if (!params.contains(name))
        throw std::invalid_argument(family + " marginal needs parameter '" + name + "'");
    return params.at(name).get<double>();
}

Marginal marginal_from_json(const json& jc) {
    const std::string family = jc.at("family").get<std::string>();
    const json params = jc.value("params", json::object());
    const double inf = std::numeric_limits<double>::infinity();
    switch (marginal_family_from_name(family)) {
        case MarginalFamily::uniform:
            return Marginal::uniform(required_param(params, "a", family),
                                     required_param(params, "b", family));
        case MarginalFamily::normal:
            return Marginal::normal(required_param(params, "mu", family),
                                    required_param(params, "sd", family));
        case MarginalFamily::truncated_normal:
            return Marginal::truncated_normal(
                required_param(params, "mu", family), required_param(params, "sd", family),
                param_or(params, "lo", -inf), param_or(params, "hi", inf));
        case MarginalFamily::gumbel:
            return Marginal::gumbel(required_param(params, "mu", family),
                                    required_param(params, "beta", family));
        case MarginalFamily::truncated_gumbel:
            return Marginal::truncated_gumbel(
                required_param(params, "mu", family), required_param(params, "beta", family),
                param_or(params, "lo", -inf), param_or(params, "hi", inf));
        case MarginalFamily::triangular:
            return Marginal::triangular(required_param(params, "a", family),
                                        required_param(params, "c", family),
                                        required_param(params, "b", family));
        case MarginalFamily::logistic:
            return Marginal::logistic(required_param(params, "location", family),
                                      required_param(params, "scale", family));
    }
    throw std::invalid_argument("unknown marginal family: " + family);
}

Copula copula_from_json(const json& jc, int dimension) {
    const std::string family = jc.value("family", std::string("gaussian"));
    switch (copula_family_from_name(family)) {
        case CopulaFamily::independent:
            return Copula::independent(dimension);
        case CopulaFamily::bivariate_logistic:
            return Copula::bivariate_logistic();
        case CopulaFamily::gaussian: {
            if (jc.contains("correlation")) {
                const auto rows = jc.at("correlation");
                Eigen::MatrixXd corr(rows.size(), rows.size());
                for (std::size_t a = 0; a < rows.size(); ++a) {
                    const auto& row = rows.at(a);
                    if (row.size() != rows.size())
                        throw std::invalid_argument("correlation matrix must be square");
                    for (std::size_t b = 0; b < row.size(); ++b)
                        corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                            row.at(b).get<double>();
                }
                return Copula::gaussian(std::move(corr));
            }
            if (jc.contains("pairs")) {
                std::vector<PairCorrelation> pairs;
                for (const auto& p : jc.at("pairs"))
                    pairs.push_back({p.at("i").get<int>(), p.at("j").get<int>(),
                                     p.at("rho").get<double>()});
                return Copula::gaussian_from_pairs(dimension, pairs);
            }
            throw std::invalid_argument("gaussian copula needs 'correlation' or 'pairs'");
        }
    }
    throw std::invalid_argument("unknown copula family: " + family);
}

std::vector<int> ordering_from_json(const json& j, int dimension) {
    std::vector<int> ordering;
    for (const auto& v : j) {
        const int label = v.get<int>();
        if (label < 1 || label > dimension)
            throw std::invalid_argument("ordering labels are 1-based component indices");
        ordering.push_back(label - 1);
    }
    return ordering;
}

} // namespace

JointModel model_from_json(const json& j) {
    JointModel model = [&j]() -> JointModel {
        if (j.contains("mvn")) {
            const json& jm = j.at("mvn");
            const auto& jmu = jm.at("mu");
            Eigen::VectorXd mu(jmu.size());
            for (std::size_t i = 0; i < jmu.size(); ++i)
                mu(static_cast<Eigen::Index>(i)) = jmu.at(i).get<double>();
            const auto& jsig = jm.at("sigma");
            Eigen::MatrixXd sigma(jsig.size(), jsig.size());
            for (std::size_t a = 0; a < jsig.size(); ++a) {
                const auto& row = jsig.at(a);
                if (row.size() != jsig.size())
                    throw std::invalid_argument("sigma must be square");
                for (std::size_t b = 0; b < row.size(); ++b)
                    sigma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                        row.at(b).get<double>();
            }
            JointModel m = JointModel::mvn(MvnSpec(std::move(mu), std::move(sigma)));
            if (j.contains("names")) m = m.named(j.at("names").get<std::vector<std::string>>());
            return m;
        }
        if (!j.contains("components"))
            throw std::invalid_argument("model config needs 'components' or 'mvn'");

        std::vector<Marginal> marginals;
        std::vector<std::string> names;
        for (const auto& jc : j.at("components")) {
            marginals.push_back(marginal_from_json(jc));
            names.push_back(jc.value("name", "x" + std::to_string(names.size() + 1)));
        }
        const int k = static_cast<int>(marginals.size());
        JointModel m =
            j.contains("copula")
                ? JointModel::with_copula(std::move(marginals), copula_from_json(j.at("copula"), k))
                : JointModel::independent(std::move(marginals));
        return m.named(std::move(names));
    }();
    if (j.contains("ordering"))
        model = model.reordered(ordering_from_json(j.at("ordering"), model.dimension()));
    return model;
}

JointModel load_model(const std::string& path) { return model_from_json(parse_file(path)); }

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.study = j.value("study", cfg.study);
    cfg.n = j.value("n", cfg.n);
    cfg.reps = j.value("reps", cfg.reps);
    if (j.contains("schemes")) {
        cfg.schemes.clear();
        for (const auto& s : j.at("schemes")) cfg.schemes.push_back(scheme_from_name(s.get<std::string>()));
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.knn_k = j.value("knn_k", cfg.knn_k);
    cfg.k_entropy = j.value("k_entropy", cfg.k_entropy);
    cfg.oracle_n = j.value("oracle_n", cfg.oracle_n);
    cfg.ci_level = j.value("ci_level", cfg.ci_level);
    cfg.with_kl = j.value("kl", cfg.with_kl);
    cfg.with_correlations = j.value("correlations", cfg.with_correlations);
    if (j.contains("model")) cfg.custom_model = model_from_json(j.at("model"));
    cfg.integrand = j.value("integrand", cfg.integrand);
    if (j.contains("ordering")) {
        const int dim = cfg.custom_model ? cfg.custom_model->dimension()
                                         : make_study(cfg.study).model.dimension();
        cfg.ordering = ordering_from_json(j.at("ordering"), dim);
    }
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
    return experiment_from_json(parse_file(path));
}

// ---------------------------------------------------------------------------
// samples and designs
// ---------------------------------------------------------------------------

void write_sample_csv(const SampleMatrix& s, const std::vector<std::string>& names,
                      const std::string& path) {
    if (static_cast<int>(names.size()) != s.dim())
        throw std::invalid_argument("write_sample_csv: one name per column required");
    std::ofstream out = open_out(path);
    for (int c = 0; c < s.dim(); ++c)
        out << (c ? "," : "") << names[static_cast<std::size_t>(c)];
    out << "\n";
    for (int j = 0; j < s.n(); ++j) {
        for (int c = 0; c < s.dim(); ++c)
            out << (c ? "," : "") << format_double(s.x(j, c));
        out << "\n";
    }
}

void write_sample_sidecar(const SampleMatrix& s, const std::vector<std::string>& names,
                          const std::string& path) {
    json j;
    j["scheme"] = scheme_name(s.scheme);
    j["seed"] = s.seed;
    j["mode"] = design_mode_name(s.mode);
    json ordering = json::array();
    for (int idx : s.ordering) ordering.push_back(idx + 1);
    j["ordering"] = ordering;
    j["n"] = s.n();
    j["k"] = s.dim();
    j["names"] = names;
    j["clamped"] = s.clamped;
    open_out(path) << j.dump(2) << "\n";
}

void write_design_csv(const Design& d, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "j,k,z\n";
    for (int j = 0; j < d.n; ++j)
        for (int c = 0; c < d.k; ++c)
            out << (j + 1) << "," << (c + 1) << "," << format_double(d.z(j, c)) << "\n";
}

Design read_design_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("j,k,z", 0) != 0)
        throw std::runtime_error("not a design CSV: " + path);

    struct Entry {
        int j, k;
        double z;
    };
    std::vector<Entry> entries;
    int max_j = 0, max_k = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Entry e;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &e.j, &e.k, &e.z) != 3)
            throw std::runtime_error("malformed design row: " + line);
        if (e.j < 1 || e.k < 1) throw std::runtime_error("design indices are 1-based");
        max_j = std::max(max_j, e.j);
        max_k = std::max(max_k, e.k);
        entries.push_back(e);
    }
    if (entries.empty()) throw std::runtime_error("empty design CSV: " + path);
    if (static_cast<long long>(entries.size()) != 1LL * max_j * max_k)
        throw std::runtime_error("design CSV is not a complete j x k grid");

    Design d;
    d.n = max_j;
    d.k = max_k;
    d.z.setConstant(max_j, max_k, std::numeric_limits<double>::quiet_NaN());
    for (const Entry& e : entries) d.z(e.j - 1, e.k - 1) = e.z;
    if (d.z.hasNaN()) throw std::runtime_error("design CSV has duplicate or missing cells");
    return d;
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

json estimate_report_to_json(const EstimateReport& rep) {
    json j;
    j["tau_hat"] = rep.tau_hat;
    j["n"] = rep.n;
    j["scheme"] = scheme_name(rep.scheme);
    j["var_lhsd_hat"] = rep.var_lhsd_hat;
    j["var_srs_hat"] = rep.var_srs_hat;
    j["ci"] = {{"lo", rep.ci.lo}, {"hi", rep.ci.hi}, {"level", rep.ci.level}};
    j["knn_k"] = rep.knn_k;
    return j;
}

json study_report_to_json(const StudyReport& rep) {
    json j;
    j["study"] = rep.study;
    j["n"] = rep.n;
    j["reps"] = rep.reps;
    j["seed"] = rep.seed;
    j["knn_k"] = rep.knn_k;
    j["k_entropy"] = rep.k_entropy;
    j["ci_level"] = rep.ci_level;
    j["oracle"] = {{"value", rep.oracle.value},
                   {"se", rep.oracle.se},
                   {"n", rep.oracle.n},
                   {"seed", rep.oracle.seed}};
    j["runtime_seconds"] = rep.runtime_seconds;

    json schemes = json::array();
    for (const auto& sm : rep.schemes) {
        json js;
        js["scheme"] = scheme_name(sm.scheme);
        js["completed"] = sm.completed;
        js["failed"] = sm.failed;
        js["bias"] = sm.bias;
        js["variance"] = sm.variance;
        js["mse"] = sm.mse;
        js["mean_tau"] = sm.mean_tau;
        js["coverage"] = sm.coverage;
        js["mean_nvar_lhsd_hat"] = sm.mean_nvar_lhsd_hat;
        js["mean_nvar_srs_hat"] = sm.mean_nvar_srs_hat;
        js["clamped"] = sm.clamped;
        if (sm.has_kl) {
            js["kl_mean"] = sm.kl_mean;
            js["kl_var"] = sm.kl_var;
        }
        if (sm.corr) {
            json pairs = json::array();
            for (const auto& row : sm.corr->pairs)
                pairs.push_back({{"i", row.i},
                                 {"j", row.j},
                                 {"rho_target", row.rho_target},
                                 {"mean_corr", row.mean_corr},
                                 {"bias", row.bias},
                                 {"mse", row.mse}});
            js["correlations"] = {{"pairs", pairs},
                                  {"max_abs_other_bias", sm.corr->max_abs_other_bias},
                                  {"max_other_mse", sm.corr->max_other_mse},
                                  {"replications", sm.corr->replications}};
        }
        schemes.push_back(js);
    }
    j["schemes"] = schemes;

    json failures = json::array();
    for (const auto& f : rep.failures)
        failures.push_back({{"scheme", f.scheme}, {"rep", f.rep}, {"message", f.message}});
    j["failures"] = failures;
    return j;
}

void write_study_outputs(const StudyReport& rep, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = [&out_dir](const char* name) {
        return (std::filesystem::path(out_dir) / name).string();
    };

    open_out(path("report.json")) << study_report_to_json(rep).dump(2) << "\n";

    {
        std::ofstream out = open_out(path("table.csv"));
        out << "scheme,bias,variance,mse,mean_tau,coverage,completed,failed\n";
        for (const auto& sm : rep.schemes)
            out << scheme_name(sm.scheme) << "," << format_double(sm.bias) << ","
                << format_double(sm.variance) << "," << format_double(sm.mse) << ","
                << format_double(sm.mean_tau) << "," << format_double(sm.coverage) << ","
                << sm.completed << "," << sm.failed << "\n";
    }

    {
        std::ofstream out = open_out(path("density.csv"));
        out << "scheme,rep,tau_hat\n";
        for (const auto& sm : rep.schemes)
            for (std::size_t r = 0; r < sm.tau_draws.size(); ++r)
                out << scheme_name(sm.scheme) << "," << r << ","
                    << format_double(sm.tau_draws[r]) << "\n";
    }

    if (std::any_of(rep.schemes.begin(), rep.schemes.end(),
                    [](const SchemeSummary& sm) { return sm.has_kl; })) {
        std::ofstream out = open_out(path("kl.csv"));
        out << "scheme,kl_mean,kl_var\n";
        for (const auto& sm : rep.schemes)
            if (sm.has_kl)
                out << scheme_name(sm.scheme) << "," << format_double(sm.kl_mean) << ","
                    << format_double(sm.kl_var) << "\n";
    }

    if (std::any_of(rep.schemes.begin(), rep.schemes.end(),
                    [](const SchemeSummary& sm) { return sm.corr.has_value(); })) {
        std::ofstream out = open_out(path("corr.csv"));
        out << "scheme,pair,rho_target,mean_corr,bias,mse\n";
        for (const auto& sm : rep.schemes) {
            if (!sm.corr) continue;
            for (const auto& row : sm.corr->pairs)
                out << scheme_name(sm.scheme) << "," << row.i << "-" << row.j << ","
                    << format_double(row.rho_target) << "," << format_double(row.mean_corr) << ","
                    << format_double(row.bias) << "," << format_double(row.mse) << "\n";
            out << scheme_name(sm.scheme) << ",other,0,," << format_double(sm.corr->max_abs_other_bias)
                << "," << format_double(sm.corr->max_other_mse) << "\n";
        }
    }
}

} // namespace lhsd
