#pragma once

#include <cmath>

namespace exchrays {

/// Numerical tolerances shared by every module. All are absolute unless the
/// name says otherwise; the "per" constants are multiplied by d or d^2.
namespace tolerance {
inline constexpr double kNegativeMass = 1e-12;
inline constexpr double kNormalization = 1e-10;
inline constexpr double kSummaryNormalization = 1e-12;
inline constexpr double kMeanPerD = 1e-9;
inline constexpr double kSecondMomentPerD2 = 1e-9;
inline constexpr double kCdfTie = 1e-12;
inline constexpr double kRayMass = 1e-12;
inline constexpr double kRayMeanPerD = 1e-10;
inline constexpr double kIntegerMean = 1e-9;
inline constexpr double kClosedFormBoundary = 1e-9;
}  // namespace tolerance

namespace detail {

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// C(n, k) as a double. Small n uses the exact multiplicative recurrence
/// (every partial product is an integer below 2^53); larger n goes through
/// log-gamma.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  if (n <= 50) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }
  return std::exp(log_binomial(n, k));
}

/// [k]_order / [d]_order with [x]_m the falling factorial x(x-1)...(x-m+1).
inline double falling_factorial_ratio(int k, int d, int order) {
  if (k < order) return 0.0;
  double r = 1.0;
  for (int t = 0; t < order; ++t) r *= static_cast<double>(k - t) / static_cast<double>(d - t);
  return r;
}

}  // namespace exchrays
