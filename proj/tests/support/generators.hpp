#pragma once

// Hand-rolled generators and independent reference computations for tests.

#include <cmath>
#include <random>
#include <vector>

#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"
#include "support/double_description.hpp"

namespace exchrays::testkit {

inline std::vector<double> dense(const RayDensity& r) {
  std::vector<double> v(static_cast<std::size_t>(r.d()) + 1, 0.0);
  for (const Atom& a : r.atoms()) v[static_cast<std::size_t>(a.index)] = a.mass;
  return v;
}

inline std::vector<DenseRay> dense_all(const std::vector<RayDensity>& rays) {
  std::vector<DenseRay> out;
  for (const auto& r : rays) out.push_back(dense(r));
  return out;
}

/// Random convex combination of 1..max_rays rays with Dirichlet(1) weights.
inline DefaultCountPmf random_mixture(const std::vector<RayDensity>& rays, std::mt19937_64& rng,
                                      std::size_t max_rays = 8) {
  std::uniform_int_distribution<std::size_t> count(1, max_rays);
  std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
  std::exponential_distribution<double> expo(1.0);
  const std::size_t k = count(rng);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = expo(rng));
  std::vector<double> probs(static_cast<std::size_t>(rays.front().d()) + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (const Atom& a : rays[pick(rng)].atoms()) probs[static_cast<std::size_t>(a.index)] += w[i] / total * a.mass;
  return DefaultCountPmf::validate(std::move(probs));
}

/// Binomial(d, p) by repeated convolution of Bernoulli(p): no binomial
/// coefficients involved.
inline std::vector<double> binomial_by_convolution(int d, double p) {
  std::vector<double> v{1.0};
  for (int i = 0; i < d; ++i) {
    std::vector<double> next(v.size() + 1, 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      next[k] += v[k] * (1.0 - p);
      next[k + 1] += v[k] * p;
    }
    v = std::move(next);
  }
  return v;
}

/// Beta-binomial pmf from rising factorials:
///   C(d,j) (a)_j (b)_{d-j} / (a+b)_d,
/// with C(d,j) from Pascal's triangle. Independent of log-gamma.
inline std::vector<double> beta_binomial_rising(int d, double a, double b) {
  std::vector<std::vector<double>> pascal(static_cast<std::size_t>(d) + 1);
  for (int n = 0; n <= d; ++n) {
    pascal[n].assign(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  std::vector<double> out(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) {
    double v = pascal[d][j];
    for (int i = 0; i < j; ++i) v *= (a + i) / (a + b + i);
    for (int i = 0; i < d - j; ++i) v *= (b + i) / (a + b + j + i);
    out[j] = v;
  }
  return out;
}

/// Solves the 3x3 Vandermonde-type system for masses on {i, j, k} with
/// total 1, mean m1 and second moment m2 by Gaussian elimination.
inline std::vector<double> solve_three_point(int i, int j, int k, double m1, double m2) {
  double A[3][4] = {{1, 1, 1, 1},
                    {double(i), double(j), double(k), m1},
                    {double(i) * i, double(j) * j, double(k) * k, m2}};
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    for (int t = 0; t < 4; ++t) std::swap(A[c][t], A[piv][t]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int t = c; t < 4; ++t) A[r][t] -= f * A[c][t];
    }
  }
  return {A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2]};
}

}  // namespace exchrays::testkit
