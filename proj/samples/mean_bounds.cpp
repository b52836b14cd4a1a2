// Rays and VaR bounds of the mean-only class for a portfolio of 100 obligors
// with a 1.7% marginal default probability.

#include <cstdio>

#include "exchrays/exchrays.hpp"

int main() {
  using namespace exchrays;
  const ClassSpec spec = ClassSpec::make(100, 0.017);
  const auto rays = mean_rays::enumerate_rays(spec);
  std::printf("%zu rays, pd = %.3f, j1M = %d, j2m = %d\n", rays.size(), spec.pd(), spec.j1M(), spec.j2m());

  const auto rho = mean_rays::correlation_bounds(spec);
  std::printf("admissible correlation: [%.4f, %.4f]\n", rho.min, rho.max);

  for (double alpha : {0.90, 0.95, 0.99}) {
    const VarBounds closed = var_bounds_mean_closed_form(spec, alpha);
    const RiskBounds scanned = scan_bounds(rays, alpha);
    std::printf("alpha %.2f: VaR in [%d, %d] (scan [%d, %d]), ray ES in [%.1f, %.1f]\n", alpha, closed.min, closed.max,
                scanned.var_min, scanned.var_max, scanned.es_min, scanned.es_max);
  }

  // Any member of the class is a mixture of rays; here the independent model.
  std::vector<double> binom(101);
  for (int j = 0; j <= 100; ++j)
    binom[static_cast<std::size_t>(j)] =
        std::exp(log_binomial(100, j) + j * std::log(0.017) + (100 - j) * std::log(0.983));
  const auto pmf = DefaultCountPmf::validate(100, binom);
  const auto parts = mean_rays::decompose(pmf, spec);
  std::printf("binomial(100, 0.017) uses %zu rays; VaR_0.99 = %d\n", parts.size(), value_at_risk(pmf, 0.99));
}
