#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "exchrays/exchrays.hpp"
#include "exchrays/report.hpp"
#include "support/double_description.hpp"
#include "support/generators.hpp"

using namespace exchrays;

namespace {

template <class F>
ErrorKind error_kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorKind::Internal;
}

}  // namespace

TEST(TwoPointRay, ExtremeSupportCarriesOneMinusP) {
  const auto spec = ClassSpec::make(100, 0.266);
  const auto r = mean_rays::two_point_ray(spec, 0, 100);
  EXPECT_NEAR(r.mass_at(0), 0.734, 1e-15);
  EXPECT_NEAR(r.mass_at(100), 0.266, 1e-15);
}

TEST(TwoPointRay, MassesOnZeroAnd29) {
  const auto spec = ClassSpec::make(100, 0.003);
  const auto r = mean_rays::two_point_ray(spec, 0, 29);
  EXPECT_NEAR(r.mass_at(0), 28.7 / 29.0, 1e-15);
  EXPECT_NEAR(r.mass_at(29), 0.3 / 29.0, 1e-15);
  EXPECT_NEAR(mean(r.to_pmf()), 0.3, 1e-13);
}

TEST(TwoPointRay, AdjacentSupport) {
  const auto spec = ClassSpec::make(100, 0.017);
  const auto r = mean_rays::two_point_ray(spec, 1, 2);
  EXPECT_NEAR(r.mass_at(1), 0.3, 1e-14);
  EXPECT_NEAR(r.mass_at(2), 0.7, 1e-14);
}

TEST(TwoPointRay, IndexOutOfRange) {
  const auto spec = ClassSpec::make(100, 0.017);
  EXPECT_EQ(error_kind_of([&] { mean_rays::two_point_ray(spec, 2, 5); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(error_kind_of([&] { mean_rays::two_point_ray(spec, 0, 1); }), ErrorKind::IndexOutOfRange);
  EXPECT_EQ(error_kind_of([&] { mean_rays::two_point_ray(spec, 0, 101); }), ErrorKind::IndexOutOfRange);
}

TEST(PointRay, IntegerMean) {
  const auto a = mean_rays::point_ray(ClassSpec::make(4, 0.5));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.support(), Support{2});
  const auto b = mean_rays::point_ray(ClassSpec::make(10, 0.3));
  EXPECT_EQ(b.support(), Support{3});
  EXPECT_DOUBLE_EQ(b.mass_at(3), 1.0);
}

TEST(PointRay, NonIntegerMean) {
  EXPECT_EQ(error_kind_of([] { mean_rays::point_ray(ClassSpec::make(100, 0.003)); }), ErrorKind::NonIntegerMean);
}

TEST(EnumerateRays, ReferenceCounts) {
  EXPECT_EQ(mean_rays::enumerate_rays(ClassSpec::make(100, 0.003)).size(), 100u);
  EXPECT_EQ(mean_rays::enumerate_rays(ClassSpec::make(100, 0.017)).size(), 198u);
  EXPECT_EQ(mean_rays::enumerate_rays(ClassSpec::make(100, 0.266)).size(), 1998u);
}

TEST(EnumerateRays, SmallIntegerMeanMatchesConeOracle) {
  const auto spec = ClassSpec::make(4, 0.5);
  const auto rays = mean_rays::enumerate_rays(spec);
  ASSERT_EQ(rays.size(), 5u);
  EXPECT_EQ(rays.back().support(), Support{2});
  const auto oracle = testkit::cone_extreme_rays(testkit::moment_rows(4, 2.0, nullptr), 5);
  EXPECT_TRUE(testkit::same_ray_sets(testkit::dense_all(rays), oracle, 1e-9));
}

TEST(EnumerateRays, LexicographicOrderPointRayLast) {
  const auto rays = mean_rays::enumerate_rays(ClassSpec::make(10, 0.3));
  for (std::size_t i = 0; i + 2 < rays.size(); ++i) EXPECT_LT(rays[i].support(), rays[i + 1].support());
  EXPECT_EQ(rays.back().support(), Support{3});
}

TEST(EnumerateRays, RejectsCorrelationClass) {
  EXPECT_EQ(error_kind_of([] { mean_rays::enumerate_rays(ClassSpec::make(10, 0.3, 0.2)); }),
            ErrorKind::InvalidArgument);
}

TEST(EnumerateRays, EveryRayValidAndAtMostTwoPoints) {
  for (double p : {0.003, 0.017, 0.266, 0.5}) {
    const auto spec = ClassSpec::make(100, p);
    for (const auto& r : mean_rays::enumerate_rays(spec)) {
      EXPECT_LE(r.size(), 2u);
      EXPECT_NO_THROW(RayDensity::make(spec, r.atoms()));
      EXPECT_NEAR(mean(r.to_pmf()), spec.pd(), 1e-10 * spec.d());
    }
  }
}

TEST(RayDensity, ValidationErrors) {
  const auto spec = ClassSpec::make(10, 0.25);
  const Atom wrong_mean[] = {{0, 0.5}, {6, 0.5}};
  EXPECT_EQ(error_kind_of([&] { RayDensity::make(spec, wrong_mean); }), ErrorKind::MeanMismatch);
  const Atom unsorted[] = {{5, 0.5}, {0, 0.5}};
  EXPECT_EQ(error_kind_of([&] { RayDensity::make(spec, unsorted); }), ErrorKind::IndexOutOfRange);
  const Atom unnormalized[] = {{0, 0.5}, {5, 0.6}};
  EXPECT_EQ(error_kind_of([&] { RayDensity::make(spec, unnormalized); }), ErrorKind::NotNormalized);
  const Atom zero_mass[] = {{0, 0.0}, {2, 1.0}};
  EXPECT_EQ(error_kind_of([&] { RayDensity::make(spec, zero_mass); }), ErrorKind::NegativeMass);
}

TEST(Decompose, SingleRayIsItself) {
  const auto spec = ClassSpec::make(100, 0.017);
  const auto r = mean_rays::two_point_ray(spec, 1, 57);
  const auto parts = mean_rays::decompose(r.to_pmf(), spec);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].ray.support(), (Support{1, 57}));
  EXPECT_NEAR(parts[0].weight, 1.0, 1e-14);
}

TEST(Decompose, BinomialAndUniformAtD4) {
  const auto spec = ClassSpec::make(4, 0.5);
  for (const auto& probs : {testkit::binomial_by_convolution(4, 0.5), std::vector<double>(5, 0.2)}) {
    const auto pmf = DefaultCountPmf::validate(4, probs);
    const auto parts = mean_rays::decompose(pmf, spec);
    double total = 0.0;
    for (const auto& w : parts) {
      EXPECT_GT(w.weight, 0.0);
      total += w.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_LE(parts.size(), 5u);
    const auto back = mean_rays::reconstruct(parts, 4);
    for (int j = 0; j <= 4; ++j) EXPECT_NEAR(back[j], pmf[j], 1e-12);
  }
}

TEST(Decompose, MeanMismatch) {
  const auto spec = ClassSpec::make(4, 0.5);
  const auto pmf = DefaultCountPmf::validate(4, {0.5, 0.5, 0.0, 0.0, 0.0});
  EXPECT_EQ(error_kind_of([&] { mean_rays::decompose(pmf, spec); }), ErrorKind::MeanMismatch);
}

TEST(MomentBounds, ReferenceOrderTwoToFour) {
  const auto B = ClassSpec::make(100, 0.266);
  const auto m2 = mean_rays::moment_bounds(B, 2);
  EXPECT_EQ(report::fixed(m2.min, 3), "0.069");
  EXPECT_EQ(report::fixed(m2.max, 3), "0.266");
  const auto m3 = mean_rays::moment_bounds(B, 3);
  EXPECT_EQ(report::fixed(m3.min, 3), "0.017");
  EXPECT_EQ(report::fixed(m3.max, 3), "0.266");
  const auto m4 = mean_rays::moment_bounds(B, 4);
  EXPECT_EQ(report::fixed(m4.min, 3), "0.004");
  EXPECT_EQ(report::fixed(m4.max, 3), "0.266");

  const auto A = mean_rays::moment_bounds(ClassSpec::make(100, 0.003), 2);
  EXPECT_EQ(report::fixed(A.min, 3), "0.000");
  EXPECT_EQ(report::fixed(A.max, 3), "0.003");
}

TEST(MomentBounds, OrderTwoClosedFormAgreesWithScanAndArgExtremes) {
  for (int d : {2, 3, 7, 10, 50, 100})
    for (double p : {0.003, 0.1, 0.266, 0.3, 0.5, 0.9}) {
      const auto spec = ClassSpec::make(d, p);
      const auto rays = mean_rays::enumerate_rays(spec);
      const auto closed = mean_rays::moment_bounds(spec, 2);
      const auto scan = mean_rays::moment_range_scan(rays, 2);
      EXPECT_NEAR(closed.min, scan.min, 1e-10) << "d=" << d << " p=" << p;
      EXPECT_NEAR(closed.max, scan.max, 1e-10) << "d=" << d << " p=" << p;
      EXPECT_EQ(closed.argmax.support(), (Support{0, d}));
      if (spec.pd_integer()) {
        EXPECT_EQ(closed.argmin.support(), Support{static_cast<int>(std::lround(spec.pd()))});
      } else {
        EXPECT_EQ(closed.argmin.support(), (Support{spec.j1M(), spec.j1M() + 1}));
      }
    }
}

TEST(MomentBounds, OrderOutOfRange) {
  const auto spec = ClassSpec::make(10, 0.25);
  EXPECT_EQ(error_kind_of([&] { mean_rays::moment_bounds(spec, 1); }), ErrorKind::OrderOutOfRange);
  EXPECT_EQ(error_kind_of([&] { mean_rays::moment_bounds(spec, 11); }), ErrorKind::OrderOutOfRange);
}

TEST(CorrelationBounds, ReferenceMinimaAndIntegerMeanCase) {
  EXPECT_EQ(report::fixed(mean_rays::correlation_bounds(ClassSpec::make(100, 0.003)).min, 3), "-0.003");
  EXPECT_EQ(report::fixed(mean_rays::correlation_bounds(ClassSpec::make(100, 0.017)).min, 3), "-0.009");
  EXPECT_EQ(report::fixed(mean_rays::correlation_bounds(ClassSpec::make(100, 0.266)).min, 3), "-0.010");
  const auto two = mean_rays::correlation_bounds(ClassSpec::make(2, 0.5));
  EXPECT_NEAR(two.min, -1.0, 1e-14);
  EXPECT_NEAR(two.max, 1.0, 1e-14);
  // Integer pd: -1/(d-1).
  const auto ten = mean_rays::correlation_bounds(ClassSpec::make(10, 0.3));
  EXPECT_NEAR(ten.min, -1.0 / 9.0, 1e-14);
}
