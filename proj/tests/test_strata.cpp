#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "lhsd/rng.hpp"
#include "lhsd/strata.hpp"

using namespace lhsd;

TEST_CASE("n=1 centered design is the midpoint in every column") {
  const Design d = generate_design(1, 3, DesignMode::centered, RngStream(99));
  REQUIRE(d.z.rows() == 1);
  REQUIRE(d.z.cols() == 3);
  for (int c = 0; c < 3; ++c) CHECK(d.z(0, c) == 0.5);
}

TEST_CASE("n=4 centered column is a permutation of the stratum midpoints") {
  const Design d = generate_design(4, 1, DesignMode::centered, RngStream(3));
  std::vector<double> col(d.z.col(0).data(), d.z.col(0).data() + 4);
  std::sort(col.begin(), col.end());
  const std::vector<double> expect = {0.125, 0.375, 0.625, 0.875};
  for (int i = 0; i < 4; ++i) CHECK(col[i] == expect[i]);
}

TEST_CASE("jittered designs stratify every column") {
  for (std::uint64_t seed : {1ULL, 2ULL, 77ULL, 123456ULL}) {
    const Design d = generate_design(30, 4, DesignMode::jittered, RngStream(seed));
    for (int c = 0; c < 4; ++c) {
      std::set<int> bins;
      for (int r = 0; r < 30; ++r) {
        const double z = d.z(r, c);
        CHECK(z > 0.0);  // exact zero is rejected so quantiles stay finite
        CHECK(z < 1.0);
        bins.insert(static_cast<int>(z * 30.0));
      }
      CHECK(bins.size() == 30);
    }
    const StratificationCertificate cert = stratification_certificate(d);
    CHECK(cert.valid);
    CHECK(cert.violations.empty());
    CHECK((cert.bin_counts.array() == 1).all());
  }
}

TEST_CASE("certificate reports the offending column and bin") {
  Design d = generate_design(5, 2, DesignMode::jittered, RngStream(8));
  // Move the column-1 point of bin 4 into bin 0: bin 0 doubles, bin 4 empties.
  for (int r = 0; r < 5; ++r) {
    if (d.z(r, 1) >= 0.8) d.z(r, 1) = 0.05;
  }
  const StratificationCertificate cert = stratification_certificate(d);
  CHECK_FALSE(cert.valid);
  CHECK(cert.bin_counts(0, 1) == 2);
  CHECK(cert.bin_counts(4, 1) == 0);
  const std::vector<std::pair<int, int>> expect = {{1, 0}, {1, 4}};
  CHECK(cert.violations == expect);
}

TEST_CASE("values outside [0,1) are flagged with bin -1") {
  Eigen::MatrixXd z(2, 1);
  z << 0.25, 1.5;
  const StratificationCertificate cert = stratification_certificate(z);
  CHECK_FALSE(cert.valid);
  bool found = false;
  for (const auto& v : cert.violations) {
    if (v == std::pair<int, int>{0, -1}) found = true;
  }
  CHECK(found);
}

TEST_CASE("an i.i.d. uniform matrix essentially never stratifies at n=100") {
  int invalid = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RngStream s(seed);
    Eigen::MatrixXd z(100, 1);
    for (int r = 0; r < 100; ++r) z(r, 0) = s.uniform01();
    if (!stratification_certificate(z).valid) ++invalid;
  }
  // P(valid) = 100!/100^100 ~ 1e-42, so all 100 trials must fail.
  CHECK(invalid == 100);
}

TEST_CASE("designs are bitwise reproducible from (n,k,mode,seed)") {
  const Design a = generate_design(23, 5, DesignMode::jittered, RngStream(2024));
  const Design b = generate_design(23, 5, DesignMode::jittered, RngStream(2024));
  CHECK(a.z == b.z);
  CHECK(a.seed == b.seed);
  const Design c = generate_design(23, 5, DesignMode::jittered, RngStream(2025));
  CHECK(a.z != c.z);
}

TEST_CASE("centered design is a function of the permutation matrix alone") {
  RngStream rng(55);
  const PermutationMatrix perm = random_permutations(12, 3, rng);
  const Design from_perm = centered_design_from_permutations(perm);
  const Design direct = generate_design(12, 3, DesignMode::centered, rng);
  CHECK(from_perm.z == direct.z);  // same substreams, same permutations
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 12; ++r) {
      CHECK(from_perm.z(r, c) == (perm.p(r, c) - 1 + 0.5) / 12.0);
    }
  }
}

TEST_CASE("permutation columns are permutations of 1..n") {
  const PermutationMatrix perm = random_permutations(40, 6, RngStream(7));
  for (int c = 0; c < 6; ++c) {
    std::set<int> seen;
    for (int r = 0; r < 40; ++r) seen.insert(perm.p(r, c));
    CHECK(seen.size() == 40);
    CHECK(*seen.begin() == 1);
    CHECK(*seen.rbegin() == 40);
  }
}

TEST_CASE("column substreams make columns independent of k") {
  // Adding a column must not change the columns already drawn.
  const Design narrow = generate_design(16, 2, DesignMode::jittered, RngStream(11));
  const Design wide = generate_design(16, 4, DesignMode::jittered, RngStream(11));
  CHECK(narrow.z == wide.z.leftCols(2));
}

TEST_CASE("invalid dimensions are rejected") {
  CHECK_THROWS_AS(generate_design(0, 2, DesignMode::jittered, RngStream(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_design(3, 0, DesignMode::jittered, RngStream(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(random_permutations(-1, 2, RngStream(1)), std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
  CHECK(design_mode_from_name("jittered") == DesignMode::jittered);
  CHECK(design_mode_from_name("centered") == DesignMode::centered);
  CHECK(design_mode_name(DesignMode::jittered) == std::string("jittered"));
  CHECK(design_mode_name(DesignMode::centered) == std::string("centered"));
  CHECK_THROWS_AS(design_mode_from_name("midpoint"), std::invalid_argument);
}
