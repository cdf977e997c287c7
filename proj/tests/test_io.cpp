#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhsd/bench.hpp"
#include "lhsd/io.hpp"

using namespace lhsd;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kDataDir = LHSD_TEST_DATA_DIR;

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lhsd_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("format_double round-trips doubles bit-exactly") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 12345.6789, 4.9406564584124654e-324,
                   2.2204460492503131e-16, -7.25, 0.0, 3.0}) {
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("design CSV writes and reads back bit-exactly") {
  const Design d = generate_design(13, 3, DesignMode::jittered, RngStream(99));
  const fs::path dir = fresh_dir("design");
  const std::string path = (dir / "design.csv").string();
  write_design_csv(d, path);
  CHECK(first_line(path) == "j,k,z");

  const Design back = read_design_csv(path);
  CHECK(back.n == 13);
  CHECK(back.k == 3);
  CHECK((back.z - d.z).cwiseAbs().maxCoeff() == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("design CSV reader rejects malformed input") {
  const fs::path dir = fresh_dir("design_bad");
  const auto write_text = [&dir](const char* name, const char* text) {
    std::ofstream out(dir / name);
    out << text;
    return (dir / name).string();
  };

  CHECK_THROWS_AS(read_design_csv((dir / "missing.csv").string()), std::runtime_error);
  CHECK_THROWS_AS(read_design_csv(write_text("header.csv", "a,b,c\n1,1,0.5\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(read_design_csv(write_text("empty.csv", "j,k,z\n")), std::runtime_error);
  CHECK_THROWS_AS(read_design_csv(write_text("garbage.csv", "j,k,z\n1,one,0.5\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(read_design_csv(write_text("hole.csv", "j,k,z\n1,1,0.5\n2,2,0.5\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(
      read_design_csv(write_text("dup.csv", "j,k,z\n1,1,0.25\n1,1,0.75\n2,1,0.5\n")),
      std::runtime_error);
  CHECK_THROWS_AS(read_design_csv(write_text("zero.csv", "j,k,z\n0,1,0.5\n")),
                  std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("sample CSV carries names and full-precision values") {
  const JointModel m = flood_study_model();
  const SampleMatrix s = sample(m, Scheme::lhsd, 5, DesignMode::jittered, RngStream(12));
  const fs::path dir = fresh_dir("sample");
  const std::string path = (dir / "sample.csv").string();
  write_sample_csv(s, m.names(), path);
  CHECK(first_line(path) == "Q,Ks,Zv,Zm,Hd,Cb,L,B");

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    for (int c = 0; c < 8; ++c) {
      const double v = std::strtod(p, &end);
      CHECK(v == s.x(rows, c));
      p = (*end == ',') ? end + 1 : end;
    }
    ++rows;
  }
  CHECK(rows == 5);
  CHECK_THROWS_AS(write_sample_csv(s, {"only", "two"}, path), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("sample sidecar records the provenance fields") {
  const JointModel m = flood_study_model();
  const SampleMatrix s = sample(m, Scheme::lhsd, 6, DesignMode::centered, RngStream(13));
  const fs::path dir = fresh_dir("sidecar");
  const std::string path = (dir / "sample.json").string();
  write_sample_sidecar(s, m.names(), path);

  std::ifstream in(path);
  json j;
  in >> j;
  CHECK(j.at("scheme") == "lhsd");
  CHECK(j.at("mode") == "centered");
  CHECK(j.at("seed").get<std::uint64_t>() == s.seed);
  CHECK(j.at("n") == 6);
  CHECK(j.at("k") == 8);
  CHECK(j.at("names").get<std::vector<std::string>>() == m.names());
  CHECK(j.at("ordering").size() == 8);
  CHECK(j.at("ordering").at(0) == 1);  // 1-based
  CHECK(j.at("clamped").get<long long>() == s.clamped);
  fs::remove_all(dir);
}

TEST_CASE("flood config file reproduces the built-in flood model") {
  const JointModel from_file = load_model(kDataDir + "/flood_model.json");
  const JointModel built_in = flood_study_model();
  CHECK(from_file.names() == built_in.names());
  CHECK(from_file.kind() == ModelKind::copula);
  CHECK((from_file.copula().correlation() - built_in.copula().correlation())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  // same law, bit for bit: identical seeds must give identical samples
  const SampleMatrix a = sample(from_file, Scheme::lhsd, 8, DesignMode::jittered, RngStream(5));
  const SampleMatrix b = sample(built_in, Scheme::lhsd, 8, DesignMode::jittered, RngStream(5));
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mvn layout and ordering are parsed") {
  const json j = {{"mvn",
                   {{"mu", {1.0, -2.0}},
                    {"sigma", {{4.0, 0.8}, {0.8, 1.0}}}}},
                  {"names", {"a", "b"}},
                  {"ordering", {2, 1}}};
  const JointModel m = model_from_json(j);
  CHECK(m.kind() == ModelKind::mvn);
  CHECK(m.dimension() == 2);
  CHECK(m.names() == std::vector<std::string>{"a", "b"});
  CHECK(m.ordering() == std::vector<int>{1, 0});
  CHECK(m.mvn_spec().sigma(0, 1) == 0.8);
}

TEST_CASE("components without a copula make an independent model") {
  const json j = {{"components",
                   {{{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}},
                    {{"family", "normal"}, {"params", {{"mu", 0.0}, {"sd", 2.0}}}}}}};
  const JointModel m = model_from_json(j);
  CHECK(m.kind() == ModelKind::independent);
  CHECK(m.names() == std::vector<std::string>{"x1", "x2"});
  CHECK(quantile(m.marginal(1), 0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("explicit correlation matrices are accepted") {
  const json j = {{"components",
                   {{{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}},
                    {{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}}}},
                  {"copula", {{"family", "gaussian"}, {"correlation", {{1.0, 0.4}, {0.4, 1.0}}}}}};
  const JointModel m = model_from_json(j);
  CHECK(m.kind() == ModelKind::copula);
  CHECK(m.copula().correlation()(0, 1) == 0.4);
}

TEST_CASE("model parsing rejects bad configs") {
  CHECK_THROWS_AS(model_from_json(json{{"foo", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(json{
                      {"components", {{{"family", "uniform"}, {"params", {{"a", 0.0}}}}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(json{
                      {"components", {{{"family", "cauchy"}, {"params", {{"a", 0.0}}}}}}}),
                  std::invalid_argument);
  const json no_corr = {{"components",
                         {{{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}},
                          {{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}}}},
                        {"copula", {{"family", "gaussian"}}}};
  CHECK_THROWS_AS(model_from_json(no_corr), std::invalid_argument);
  const json rect = {{"components",
                      {{{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}},
                       {{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}}}},
                     {"copula", {{"family", "gaussian"}, {"correlation", {{1.0, 0.4}}}}}};
  CHECK_THROWS_AS(model_from_json(rect), std::invalid_argument);
  const json bad_order = {{"mvn", {{"mu", {0.0, 0.0}}, {"sigma", {{1.0, 0.0}, {0.0, 1.0}}}}},
                          {"ordering", {0, 1}}};
  CHECK_THROWS_AS(model_from_json(bad_order), std::invalid_argument);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), std::runtime_error);
}

TEST_CASE("experiment config parsing fills fields and defaults") {
  const json j = {{"study", "flood"}, {"n", 25},     {"reps", 120},
                  {"schemes", {"srs", "lhsd_c"}},    {"seed", 77},
                  {"knn_k", 9},       {"oracle_n", 5000}, {"kl", true},
                  {"correlations", true}, {"ordering", {8, 7, 6, 5, 4, 3, 2, 1}}};
  const ExperimentConfig cfg = experiment_from_json(j);
  CHECK(cfg.study == "flood");
  CHECK(cfg.n == 25);
  CHECK(cfg.reps == 120);
  REQUIRE(cfg.schemes.size() == 2);
  CHECK(cfg.schemes[0] == Scheme::srs);
  CHECK(cfg.schemes[1] == Scheme::lhsd_c);
  CHECK(cfg.seed == 77);
  CHECK(cfg.knn_k == 9);
  CHECK(cfg.oracle_n == 5000);
  CHECK(cfg.with_kl);
  CHECK(cfg.with_correlations);
  CHECK(cfg.ordering == std::vector<int>{7, 6, 5, 4, 3, 2, 1, 0});
  CHECK_FALSE(cfg.custom_model.has_value());

  const ExperimentConfig defaults = experiment_from_json(json::object());
  CHECK(defaults.study == "logistic");
  CHECK(defaults.n == 30);
  CHECK(defaults.reps == 1000);
  CHECK(defaults.schemes.size() == 4);
  CHECK(defaults.seed == 1);
  CHECK(defaults.knn_k == 0);
  CHECK(defaults.k_entropy == 3);
  CHECK(defaults.ci_level == 0.95);
  CHECK_FALSE(defaults.with_kl);

  const json custom = {{"study", "custom"},
                       {"model",
                        {{"components",
                          {{{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}},
                           {{"family", "uniform"}, {"params", {{"a", 0.0}, {"b", 1.0}}}}}}}},
                       {"integrand", "interaction10"}};
  const ExperimentConfig ccfg = experiment_from_json(custom);
  CHECK(ccfg.study == "custom");
  REQUIRE(ccfg.custom_model.has_value());
  CHECK(ccfg.custom_model->dimension() == 2);
  CHECK(ccfg.integrand == "interaction10");
}

TEST_CASE("estimate reports serialize with the documented schema") {
  const JointModel m = logistic_study_model();
  const SampleMatrix s = sample(m, Scheme::lhsd, 20, DesignMode::jittered, RngStream(21));
  const EstimateReport rep = estimate_report(m, s, h_logistic);
  const json j = estimate_report_to_json(rep);

  CHECK(j.size() == 7);
  CHECK(j.at("tau_hat") == rep.tau_hat);
  CHECK(j.at("n") == 20);
  CHECK(j.at("scheme") == "lhsd");
  CHECK(j.at("var_lhsd_hat") == rep.var_lhsd_hat);
  CHECK(j.at("var_srs_hat") == rep.var_srs_hat);
  CHECK(j.at("ci").size() == 3);
  CHECK(j.at("ci").at("lo") == rep.ci.lo);
  CHECK(j.at("ci").at("hi") == rep.ci.hi);
  CHECK(j.at("ci").at("level") == 0.95);
  CHECK(j.at("knn_k") == rep.knn_k);
}

TEST_CASE("study outputs land in the requested directory") {
  ExperimentConfig cfg;
  cfg.study = "custom";
  cfg.custom_model =
      JointModel::independent({Marginal::uniform(0.0, 1.0), Marginal::uniform(0.0, 1.0)});
  cfg.integrand = "sum";
  cfg.n = 8;
  cfg.reps = 10;
  cfg.seed = 17;
  cfg.oracle_n = 500;
  cfg.with_kl = true;
  cfg.with_correlations = true;
  const StudyReport rep = run_study(cfg);

  const fs::path dir = fresh_dir("study_out");
  fs::remove_all(dir);  // write_study_outputs must create it
  write_study_outputs(rep, dir.string());
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "table.csv"));
  CHECK(fs::exists(dir / "density.csv"));
  CHECK(fs::exists(dir / "kl.csv"));
  CHECK(fs::exists(dir / "corr.csv"));

  CHECK(first_line(dir / "table.csv") == "scheme,bias,variance,mse,mean_tau,coverage,completed,failed");
  CHECK(first_line(dir / "density.csv") == "scheme,rep,tau_hat");
  CHECK(first_line(dir / "kl.csv") == "scheme,kl_mean,kl_var");
  CHECK(first_line(dir / "corr.csv") == "scheme,pair,rho_target,mean_corr,bias,mse");

  std::ifstream in(dir / "report.json");
  json j;
  in >> j;
  CHECK(j.at("study") == "custom");
  CHECK(j.at("n") == 8);
  CHECK(j.at("reps") == 10);
  CHECK(j.at("schemes").size() == 4);
  CHECK(j.at("schemes").at(0).at("scheme") == "srs");
  CHECK(j.at("schemes").at(0).contains("kl_mean"));
  CHECK(j.at("schemes").at(0).at("correlations").contains("max_abs_other_bias"));
  CHECK(j.at("failures").empty());
  CHECK(j.at("oracle").at("n") == 500);
  fs::remove_all(dir);
}
