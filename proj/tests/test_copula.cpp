#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lhsd/copula.hpp"
#include "lhsd/dist.hpp"
#include "lhsd/rng.hpp"

using namespace lhsd;

namespace {

Copula flood_structure_copula() {
  return Copula::gaussian_from_pairs(
      8, {{1, 2, 0.5}, {3, 4, 0.3}, {7, 8, 0.3}});
}

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("bivariate logistic conditional hits the closed-form values") {
  const Copula cop = Copula::bivariate_logistic();
  const ConditionalCopula cc(cop, 2);
  CHECK(conditional_cdf(cc, 0.5, vec({0.5})) == 4.0 / 9.0);
  CHECK(conditional_quantile(cc, 0.25, vec({0.5})) == 1.0 / 3.0);
  // quantile inverts the cdf at those exact points
  CHECK(conditional_cdf(cc, 1.0 / 3.0, vec({0.5})) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("gaussian conditional at the median stays at the median") {
  Eigen::MatrixXd r(2, 2);
  r << 1.0, 0.5, 0.5, 1.0;
  const ConditionalCopula cc(Copula::gaussian(r), 2);
  CHECK(conditional_cdf(cc, 0.5, vec({0.5})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(conditional_quantile(cc, 0.5, vec({0.5})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("bivariate normal cdf matches an independent quadrature oracle") {
  // Oracle: Simpson integration of phi(s) * Phi((y - rho s)/sqrt(1-rho^2))
  // over s in [-9, x] with 200001 nodes, a different formulation entirely.
  struct Case { double x, y, rho, expect; };
  const Case cases[] = {
      {0.0, 0.0, 0.5, 0.3333333333333299},
      {0.0, 0.0, -0.5, 0.16666666666666696},
      {1.0, -0.5, 0.3, 0.28313842024447883},
      {0.5, 0.5, 0.8, 0.601485363476697},
      {-1.0, 2.0, -0.7, 0.14021985419403896},
      {2.0, 1.0, 0.95, 0.8413361470328607},
      {0.3, -0.2, 0.0, 0.2599802313126763},
      {1.5, 1.5, 0.5, 0.8847086394543892},
  };
  for (const Case& c : cases) {
    CHECK(bivariate_normal_cdf(c.x, c.y, c.rho) ==
          doctest::Approx(c.expect).epsilon(1e-11));
  }
  // exact identity Phi2(0,0,rho) = 1/4 + asin(rho)/(2 pi)
  for (double rho : {-0.9, -0.3, 0.2, 0.7}) {
    CHECK(bivariate_normal_cdf(0.0, 0.0, rho) ==
          doctest::Approx(0.25 + std::asin(rho) / (2.0 * M_PI)).epsilon(1e-13));
  }
  // symmetry and infinite arguments
  CHECK(bivariate_normal_cdf(0.7, -0.3, 0.4) ==
        doctest::Approx(bivariate_normal_cdf(-0.3, 0.7, 0.4)).epsilon(1e-14));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(bivariate_normal_cdf(inf, 0.3, 0.5) ==
        doctest::Approx(standard_normal_cdf(0.3)).epsilon(1e-14));
  CHECK(bivariate_normal_cdf(-inf, 0.3, 0.5) == 0.0);
}

TEST_CASE("copula cdf boundary behavior is exact") {
  const Copula bl = Copula::bivariate_logistic();
  CHECK(bl.cdf(vec({1.0, 1.0})) == 1.0);
  CHECK(bl.cdf(vec({0.4, 0.0})) == 0.0);
  CHECK(bl.cdf(vec({0.4, 1.0})) == 0.4);  // uniform margins

  const Copula ind = Copula::independent(3);
  CHECK(ind.cdf(vec({0.2, 0.5, 0.5})) == 0.05);
  CHECK(ind.cdf(vec({0.2, 1.0, 1.0})) == 0.2);

  Eigen::MatrixXd r(2, 2);
  r << 1.0, 0.6, 0.6, 1.0;
  const Copula g = Copula::gaussian(r);
  CHECK(g.cdf(vec({0.44, 1.0})) == 0.44);
  CHECK(g.cdf(vec({0.0, 0.7})) == 0.0);
  CHECK_THROWS_AS(g.cdf(vec({0.5, 1.5})), std::domain_error);

  const Copula g8 = flood_structure_copula();
  Eigen::VectorXd mostly_one = Eigen::VectorXd::Ones(8);
  mostly_one(3) = 0.37;
  CHECK(g8.cdf(mostly_one) == 0.37);
  mostly_one(4) = 0.6;  // two non-unit coordinates in an 8-d gaussian
  CHECK_THROWS_AS(g8.cdf(mostly_one), std::invalid_argument);
}

TEST_CASE("conditional cdf is the u-derivative of the copula cdf") {
  Eigen::MatrixXd r1(2, 2), r2(2, 2);
  r1 << 1.0, 0.5, 0.5, 1.0;
  r2 << 1.0, -0.3, -0.3, 1.0;
  const std::vector<Copula> cops = {Copula::independent(2), Copula::bivariate_logistic(),
                                    Copula::gaussian(r1), Copula::gaussian(r2)};
  const double h = 1e-5;
  for (const Copula& cop : cops) {
    const ConditionalCopula cc(cop, 2);
    for (int i = 1; i <= 20; ++i) {
      for (int j = 1; j <= 20; ++j) {
        const double u1 = i / 21.0;
        const double u2 = j / 21.0;
        const double fd =
            (cop.cdf(vec({u1 + h, u2})) - cop.cdf(vec({u1 - h, u2}))) / (2.0 * h);
        CHECK(std::fabs(conditional_cdf(cc, u2, vec({u1})) - fd) <= 1e-6);
      }
    }
  }
}

TEST_CASE("conditional quantile inverts conditional cdf across the flood structure") {
  const Copula cop = flood_structure_copula();
  RngStream s(301);
  for (int k = 2; k <= 8; ++k) {
    const ConditionalCopula cc(cop, k);
    for (int rep = 0; rep < 150; ++rep) {
      Eigen::VectorXd cond(k - 1);
      for (int i = 0; i < k - 1; ++i) cond(i) = 0.02 + 0.96 * s.uniform01();
      const double z = 0.001 + 0.998 * s.uniform01();
      const double u = conditional_quantile(cc, z, cond);
      CHECK(u > 0.0);
      CHECK(u < 1.0);
      CHECK(std::fabs(conditional_cdf(cc, u, cond) - z) <= 1e-9);
    }
  }
}

TEST_CASE("conditional quantile inverts conditional cdf for the logistic family") {
  const ConditionalCopula cc(Copula::bivariate_logistic(), 2);
  RngStream s(302);
  for (int rep = 0; rep < 500; ++rep) {
    Eigen::VectorXd cond = vec({0.02 + 0.96 * s.uniform01()});
    const double z = 0.001 + 0.998 * s.uniform01();
    const double u = conditional_quantile(cc, z, cond);
    CHECK(std::fabs(conditional_cdf(cc, u, cond) - z) <= 1e-12);
  }
}

TEST_CASE("numeric inversion agrees with the closed forms") {
  Eigen::MatrixXd r(2, 2);
  r << 1.0, 0.6, 0.6, 1.0;
  const std::vector<Copula> cops = {Copula::bivariate_logistic(), Copula::gaussian(r)};
  RngStream s(303);
  for (const Copula& cop : cops) {
    const ConditionalCopula cc(cop, 2);
    for (int rep = 0; rep < 200; ++rep) {
      Eigen::VectorXd cond = vec({0.05 + 0.9 * s.uniform01()});
      const double z = 0.01 + 0.98 * s.uniform01();
      CHECK(std::fabs(numeric_conditional_quantile(cc, z, cond) -
                      conditional_quantile(cc, z, cond)) <= 1e-10);
    }
  }
}

TEST_CASE("conditional cdf is monotone in u") {
  Eigen::MatrixXd r(2, 2);
  r << 1.0, -0.7, -0.7, 1.0;
  for (const Copula& cop : {Copula::bivariate_logistic(), Copula::gaussian(r)}) {
    const ConditionalCopula cc(cop, 2);
    for (double u1 : {0.1, 0.5, 0.9}) {
      double prev = -1.0;
      for (int i = 1; i < 100; ++i) {
        const double v = conditional_cdf(cc, i / 100.0, vec({u1}));
        CHECK(v >= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("identity-correlation gaussian collapses to independence exactly") {
  const Copula g = Copula::gaussian(Eigen::MatrixXd::Identity(3, 3));
  const ConditionalCopula c2(g, 2);
  const ConditionalCopula c3(g, 3);
  CHECK(conditional_cdf(c2, 0.37, vec({0.81})) == 0.37);
  CHECK(conditional_quantile(c2, 0.66, vec({0.12})) == 0.66);
  CHECK(conditional_density(c3, 0.25, vec({0.5, 0.5})) == 1.0);
  CHECK(g.log_density(vec({0.3, 0.6, 0.9})) == 0.0);

  const Copula g2 = Copula::gaussian(Eigen::MatrixXd::Identity(2, 2));
  CHECK(g2.cdf(vec({0.3, 0.7})) == 0.3 * 0.7);
}

TEST_CASE("copula density integrates against the conditional decomposition") {
  // c(u1,u2) = C_2'(u2|u1); check log_density against conditional_density.
  Eigen::MatrixXd r(2, 2);
  r << 1.0, 0.45, 0.45, 1.0;
  for (const Copula& cop : {Copula::bivariate_logistic(), Copula::gaussian(r)}) {
    const ConditionalCopula cc(cop, 2);
    RngStream s(304);
    for (int rep = 0; rep < 100; ++rep) {
      const double u1 = 0.05 + 0.9 * s.uniform01();
      const double u2 = 0.05 + 0.9 * s.uniform01();
      CHECK(std::exp(cop.log_density(vec({u1, u2}))) ==
            doctest::Approx(conditional_density(cc, u2, vec({u1}))).epsilon(1e-10));
    }
  }
}

TEST_CASE("pushing the logistic copula through logistic margins gives the Gumbel joint cdf") {
  // F(x1,x2) = 1/(1 + e^-x1 + e^-x2): empirical cdf of 1e5 sampled pairs
  // must match it within 3 binomial SEs at every grid point.
  const Copula cop = Copula::bivariate_logistic();
  const ConditionalCopula cc(cop, 2);
  const Marginal lg = Marginal::logistic(0.0, 1.0);
  const int n = 100000;
  RngStream s(305);
  std::vector<double> x1(n), x2(n);
  for (int i = 0; i < n; ++i) {
    double u1;
    do {
      u1 = s.uniform01();
    } while (u1 == 0.0);
    double z;
    do {
      z = s.uniform01();
    } while (z == 0.0);
    const double u2 = conditional_quantile(cc, z, vec({u1}));
    x1[i] = quantile(lg, u1);
    x2[i] = quantile(lg, u2);
  }
  for (double a : {-1.0, 0.0, 1.0}) {
    for (double b : {-1.0, 0.0, 1.0}) {
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (x1[i] <= a && x2[i] <= b) ++count;
      const double target = 1.0 / (1.0 + std::exp(-a) + std::exp(-b));
      const double se = std::sqrt(target * (1.0 - target) / n);
      CHECK(std::fabs(count / static_cast<double>(n) - target) <= 3.0 * se);
    }
  }
}

TEST_CASE("gaussian copula with normal margins reproduces mvn conditionals") {
  Eigen::MatrixXd r(4, 4);
  r << 1.0, 0.5, 0.2, 0.1,
       0.5, 1.0, 0.3, 0.0,
       0.2, 0.3, 1.0, 0.25,
       0.1, 0.0, 0.25, 1.0;
  const Eigen::Vector4d mu(1.0, -1.0, 0.0, 2.0);
  const Eigen::Vector4d sd(2.0, 1.0, 0.5, 3.0);
  std::vector<Marginal> marginals;
  for (int i = 0; i < 4; ++i) marginals.push_back(Marginal::normal(mu(i), sd(i)));
  const Copula cop = Copula::gaussian(r);
  Eigen::MatrixXd sigma(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sigma(i, j) = r(i, j) * sd(i) * sd(j);
  const MvnSpec spec(mu, sigma);

  RngStream s(306);
  for (int rep = 0; rep < 1000; ++rep) {
    const int k = 2 + static_cast<int>(s.below(3));
    Eigen::VectorXd prefix(k - 1);
    for (int i = 0; i < k - 1; ++i)
      prefix(i) = mu(i) + sd(i) * (4.0 * s.uniform01() - 2.0);
    const double x_k = mu(k - 1) + sd(k - 1) * (4.0 * s.uniform01() - 2.0);
    const MvnConditional c = mvn_conditional(spec, k, prefix);
    const double direct = standard_normal_cdf((x_k - c.mu_star) / std::sqrt(c.sigma_star_sq));
    const double via_copula = conditional_input_cdf(marginals, cop, k, x_k, prefix);
    CHECK(std::fabs(via_copula - direct) <= 1e-8);
  }
}

TEST_CASE("conditional_input_cdf handles k=1 and boundary prefixes") {
  const std::vector<Marginal> ms = {Marginal::uniform(0.0, 1.0), Marginal::uniform(0.0, 1.0)};
  const Copula cop = Copula::independent(2);
  CHECK(conditional_input_cdf(ms, cop, 1, 0.25, Eigen::VectorXd()) == 0.25);
  CHECK_THROWS_AS(conditional_input_cdf(ms, cop, 2, 0.5, vec({0.0})), std::domain_error);
  CHECK_THROWS_AS(conditional_input_cdf(ms, cop, 2, 0.5, vec({1.0})), std::domain_error);
  CHECK_THROWS_AS(conditional_input_cdf(ms, cop, 3, 0.5, vec({0.5, 0.5})),
                  std::invalid_argument);
}

TEST_CASE("boundary conditioning values are rejected") {
  const ConditionalCopula cc(Copula::bivariate_logistic(), 2);
  CHECK_THROWS_AS(conditional_cdf(cc, 0.5, vec({0.0})), std::domain_error);
  CHECK_THROWS_AS(conditional_cdf(cc, 0.5, vec({1.0})), std::domain_error);
  CHECK_THROWS_AS(conditional_quantile(cc, 0.0, vec({0.5})), std::domain_error);
  CHECK_THROWS_AS(conditional_quantile(cc, 1.0, vec({0.5})), std::domain_error);
  CHECK_THROWS_AS(conditional_cdf(cc, -0.1, vec({0.5})), std::domain_error);
}

TEST_CASE("copula construction validates its inputs") {
  Eigen::MatrixXd bad_diag(2, 2);
  bad_diag << 1.0, 0.2, 0.2, 0.9;
  CHECK_THROWS_AS(Copula::gaussian(bad_diag), std::invalid_argument);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.3, -0.3, 1.0;
  CHECK_THROWS_AS(Copula::gaussian(asym), std::invalid_argument);
  Eigen::MatrixXd not_pd(3, 3);
  not_pd << 1.0, 0.9, -0.9, 0.9, 1.0, 0.9, -0.9, 0.9, 1.0;
  CHECK_THROWS_AS(Copula::gaussian(not_pd), std::invalid_argument);

  CHECK_THROWS_AS(Copula::gaussian_from_pairs(3, {{1, 4, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Copula::gaussian_from_pairs(3, {{2, 2, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(Copula::gaussian_from_pairs(3, {{1, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Copula::gaussian_from_pairs(3, {{1, 2, 0.5}, {2, 1, 0.4}}),
                  std::invalid_argument);
  // repeating the same value is harmless
  const Copula ok = Copula::gaussian_from_pairs(3, {{1, 2, 0.5}, {2, 1, 0.5}});
  CHECK(ok.correlation()(0, 1) == 0.5);
  CHECK_THROWS_AS(ConditionalCopula(ok, 1), std::invalid_argument);
  CHECK_THROWS_AS(ConditionalCopula(ok, 4), std::invalid_argument);
}

TEST_CASE("pair expansion builds the documented matrix") {
  const Copula cop = flood_structure_copula();
  const Eigen::MatrixXd& r = cop.correlation();
  CHECK(r(0, 1) == 0.5);
  CHECK(r(2, 3) == 0.3);
  CHECK(r(6, 7) == 0.3);
  CHECK(r(0, 2) == 0.0);
  CHECK(r(4, 4) == 1.0);
  int nonzero_offdiag = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j && r(i, j) != 0.0) ++nonzero_offdiag;
  CHECK(nonzero_offdiag == 6);
}

TEST_CASE("permuted relabels the gaussian correlation and fixes exchangeable families") {
  const Copula cop = flood_structure_copula();
  std::vector<int> ordering = {7, 6, 5, 4, 3, 2, 1, 0};
  const Copula rev = cop.permuted(ordering);
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      CHECK(rev.correlation()(a, b) == cop.correlation()(7 - a, 7 - b));
  CHECK_THROWS_AS(cop.permuted({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(cop.permuted({0, 0, 2, 3, 4, 5, 6, 7}), std::invalid_argument);

  const Copula bl = Copula::bivariate_logistic();
  const Copula bl_swapped = bl.permuted({1, 0});
  CHECK(bl_swapped.family() == CopulaFamily::bivariate_logistic);
  CHECK(bl_swapped.dimension() == 2);
}

TEST_CASE("clamp_unit_interior counts boundary adjustments") {
  ClampStats stats;
  CHECK(clamp_unit_interior(0.5, stats) == 0.5);
  CHECK(stats.clamped == 0);
  CHECK(clamp_unit_interior(0.0, stats) == kUnitClampEps);
  CHECK(clamp_unit_interior(1.0, stats) == 1.0 - kUnitClampEps);
  CHECK(clamp_unit_interior(-0.3, stats) == kUnitClampEps);
  CHECK(stats.clamped == 3);
}

TEST_CASE("family names round-trip") {
  for (CopulaFamily f : {CopulaFamily::independent, CopulaFamily::gaussian,
                         CopulaFamily::bivariate_logistic}) {
    CHECK(copula_family_from_name(copula_family_name(f)) == f);
  }
  CHECK_THROWS_AS(copula_family_from_name("clayton"), std::invalid_argument);
}
