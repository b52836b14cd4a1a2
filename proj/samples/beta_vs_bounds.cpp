// Where does a moment-matched beta-binomial VaR fall inside the bounds of
// the class with the same p and rho?

#include <cstdio>
#include <cstdlib>

#include "exchrays/exchrays.hpp"

int main(int argc, char** argv) {
  using namespace exchrays;
  const double p = argc > 1 ? std::atof(argv[1]) : 0.266;
  const double rho = argc > 2 ? std::atof(argv[2]) : 1.0 / 6.0;
  const ClassSpec spec = ClassSpec::make(100, p, rho);

  corr_rays::EnumerationStats stats;
  const auto rays = corr_rays::enumerate_rays(spec, 0, &stats);
  std::printf("p = %g, rho = %g: %zu rays from %zu triples\n", p, rho, stats.rays, stats.triples_scanned);

  const auto beta = beta_mix::calibrate(p, rho);
  const auto pmf = beta_mix::pmf(beta, 100);
  std::printf("beta mixing a = %.6g, b = %.6g\n", beta.a, beta.b);
  for (double alpha : {0.90, 0.95, 0.99}) {
    const RiskBounds b = var_bounds_scan(rays, alpha);
    std::printf("alpha %.2f: [%3d, %3d]  beta VaR %3d  beta ES %.2f\n", alpha, b.var_min, b.var_max,
                value_at_risk(pmf, alpha), expected_shortfall(pmf, alpha));
  }
}
