#ifndef LHSD_TESTS_TESTUTIL_HPP
#define LHSD_TESTS_TESTUTIL_HPP

// Shared statistical helpers for the test suites.  Everything here is
// deliberately written from scratch against textbook formulas so that the
// library under test never certifies itself.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace lhsd::test {

// Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2), the asymptotic
// Kolmogorov tail probability.
inline double ks_tail(double lambda) {
  double p = 0.0;
  double sign = 1.0;
  for (int term = 1; term <= 100; ++term) {
    const double contrib = sign * 2.0 * std::exp(-2.0 * term * term * lambda * lambda);
    p += contrib;
    sign = -sign;
    if (std::fabs(contrib) < 1e-12 * std::fabs(p) + 1e-300) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

// Asymptotic two-sample Kolmogorov-Smirnov p-value (Numerical Recipes form):
// lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D with ne = n1*n2/(n1+n2).
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("ks_two_sample_p: need at least 2 points per sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < n1 && j < n2) {
    const double x1 = a[i];
    const double x2 = b[j];
    if (x1 <= x2) ++i;
    if (x2 <= x1) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 -
                              static_cast<double>(j) / n2));
  }
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    (static_cast<double>(n1) + static_cast<double>(n2));
  return ks_tail((std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d);
}

// One-sample Kolmogorov-Smirnov p-value against U(0,1).
inline double ks_uniform_p(std::vector<double> v) {
  if (v.size() < 2) throw std::invalid_argument("ks_uniform_p: need at least 2 points");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / m - v[i]));
    d = std::max(d, std::fabs(v[i] - static_cast<double>(i) / m));
  }
  const double rm = std::sqrt(static_cast<double>(m));
  return ks_tail((rm + 0.12 + 0.11 / rm) * d);
}

inline double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson: need two equally sized samples");
  }
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double denom = xc.norm() * yc.norm();
  if (denom == 0.0) throw std::invalid_argument("pearson: constant input");
  return xc.dot(yc) / denom;
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Reference standard normal cdf, independent of the library implementation.
inline double ref_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Solve A y = b by Gaussian elimination with partial pivoting.  Used as an
// independent oracle for conditional-normal coefficients.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
    }
    std::swap(A[col], A[piv]);
    std::swap(b[col], b[piv]);
    if (A[col][col] == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> y(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= A[r][c] * y[c];
    y[r] = s / A[r][r];
  }
  return y;
}

}  // namespace lhsd::test

#endif  // LHSD_TESTS_TESTUTIL_HPP
