#pragma once

// Beta-mixed binomial benchmark: defaults are conditionally independent
// Bernoulli(theta) with theta ~ Beta(a, b), calibrated by matching p and mu2.

#include <cmath>
#include <string>
#include <vector>

#include "exchrays/errors.hpp"
#include "exchrays/numeric.hpp"
#include "exchrays/pmf.hpp"

namespace exchrays::beta_mix {

struct BetaMixParams {
  double a;
  double b;

  double implied_p() const noexcept { return a / (a + b); }
  double implied_rho() const noexcept { return 1.0 / (a + b + 1.0); }
  /// E[theta^2] = a(a+1) / ((a+b)(a+b+1)).
  double implied_mu2() const noexcept { return a * (a + 1.0) / ((a + b) * (a + b + 1.0)); }
};

/// p = a/(a+b) and rho = 1/(a+b+1), hence a + b = 1/rho - 1.
inline BetaMixParams calibrate(double p, double rho) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0,1)");
  if (!(rho > 0.0 && rho < 1.0)) {
    throw Error(ErrorKind::InadmissibleCorrelation,
                "beta mixing needs 0 < rho < 1, got rho = " + std::to_string(rho));
  }
  const double total = 1.0 / rho - 1.0;
  return {p * total, (1.0 - p) * total};
}

inline double log_beta(double x, double y) { return std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y); }

/// p(j) = C(d,j) B(a + j, b + d - j) / B(a, b), in log space.
inline DefaultCountPmf pmf(const BetaMixParams& params, int d) {
  if (!(params.a > 0.0 && params.b > 0.0)) throw Error(ErrorKind::InvalidArgument, "beta parameters must be positive");
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
  const double log_norm = log_beta(params.a, params.b);
  std::vector<double> probs(static_cast<std::size_t>(d) + 1);
  for (int j = 0; j <= d; ++j) {
    probs[static_cast<std::size_t>(j)] =
        std::exp(log_binomial(d, j) + log_beta(params.a + j, params.b + d - j) - log_norm);
  }
  return DefaultCountPmf::validate(d, std::move(probs));
}

inline int value_at_risk(const BetaMixParams& params, int d, double alpha) {
  return exchrays::value_at_risk(pmf(params, d), alpha);
}

inline double expected_shortfall(const BetaMixParams& params, int d, double alpha) {
  return exchrays::expected_shortfall(pmf(params, d), alpha);
}

}  // namespace exchrays::beta_mix
