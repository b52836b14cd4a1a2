// Analytic ray sets against the double description oracle on small d.

#include <gtest/gtest.h>

#include "support/checks.hpp"

using namespace exchrays;

TEST(ConeOracle, RecoversUnitSimplexWithoutConstraints) {
  const auto rays = testkit::cone_extreme_rays({}, 4);
  EXPECT_EQ(rays.size(), 4u);
}

TEST(ConeOracle, SingleMeanRowByHand) {
  // d = 2, pd = 1: rays are the point mass at 1 and (1/2, 0, 1/2).
  const auto rays = testkit::cone_extreme_rays(testkit::moment_rows(2, 1.0, nullptr), 3);
  const std::vector<testkit::DenseRay> want{{0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}};
  EXPECT_TRUE(testkit::same_ray_sets(rays, want, 1e-15));
}

TEST(ConeOracle, MeanOnlyGrid) {
  const auto r = testkit::oracle_mean_grid();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(ConeOracle, CorrelationClasses) {
  const auto r = testkit::oracle_corr(50, 20261017);
  EXPECT_TRUE(r.ok) << r.detail;
}
