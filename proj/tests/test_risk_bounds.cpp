#include <gtest/gtest.h>

#include <vector>

#include "exchrays/exchrays.hpp"
#include "exchrays/report.hpp"

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

RiskBounds corr_bounds(double p, double rho, double alpha) {
  return var_bounds_scan(corr_rays::enumerate_rays(ClassSpec::make(100, p, rho)), alpha);
}

}  // namespace

TEST(VarBoundsScan, ReferenceCorrelationCells) {
  const auto a = corr_bounds(0.017, 0.5, 0.99);
  EXPECT_EQ(a.var_min, 1);
  EXPECT_EQ(a.var_max, 93);
  const auto b = corr_bounds(0.266, 5.0 / 6.0, 0.9);
  EXPECT_EQ(b.var_min, 81);
  EXPECT_EQ(b.var_max, 100);
  const auto c = corr_bounds(0.003, 1.0 / 6.0, 0.99);
  EXPECT_EQ(c.var_min, 1);
  EXPECT_EQ(c.var_max, 22);
}

TEST(VarBoundsScan, EmptyRaySet) {
  const std::vector<RayDensity> none;
  EXPECT_EQ(error_kind_of([&] { var_bounds_scan(none, 0.9); }), ErrorKind::EmptyRaySet);
  EXPECT_EQ(error_kind_of([&] { es_bounds_scan(none, 0.9); }), ErrorKind::EmptyRaySet);
}

TEST(VarBoundsScan, RecordsAttainingRays) {
  const auto spec = ClassSpec::make(100, 0.003);
  const auto rays = mean_rays::enumerate_rays(spec);
  const auto b = scan_bounds(rays, 0.99);
  EXPECT_EQ(b.var_max, 29);
  // r(0,29) is the lexicographically smallest ray reaching 29.
  EXPECT_EQ(b.var_argmax, (Support{0, 29}));
  EXPECT_EQ(b.es_argmin.size(), 2u);
}

TEST(ClosedForm, ReferenceMeanOnlyTables) {
  struct Case {
    double p, alpha;
    int lo, hi;
  };
  const Case cases[] = {{0.003, 0.9, 0, 2},    {0.003, 0.95, 0, 5},    {0.003, 0.99, 0, 29},
                        {0.017, 0.9, 0, 16},   {0.017, 0.95, 0, 33},   {0.017, 0.99, 1, 100},
                        {0.266, 0.9, 19, 100}, {0.266, 0.95, 23, 100}, {0.266, 0.99, 26, 100}};
  for (const auto& c : cases) {
    const auto spec = ClassSpec::make(100, c.p);
    EXPECT_EQ(var_bounds_mean_closed_form(spec, c.alpha), (VarBounds{c.lo, c.hi})) << c.p << " " << c.alpha;
    const auto scan = var_bounds_scan(mean_rays::enumerate_rays(spec), c.alpha);
    EXPECT_EQ(scan.var_min, c.lo);
    EXPECT_EQ(scan.var_max, c.hi);
  }
}

TEST(ClosedForm, ExactIntegerQuotientTakesStrictlySmaller) {
  // pd / (1 - alpha) = 0.5 / 0.1 = 5 exactly: the largest integer strictly below is 4.
  const auto spec = ClassSpec::make(10, 0.05);
  EXPECT_EQ(var_bounds_mean_closed_form(spec, 0.9), (VarBounds{0, 4}));
  EXPECT_EQ(var_bounds_scan(mean_rays::enumerate_rays(spec), 0.9).var_max, 4);
}

TEST(ClosedForm, BoundaryWhereOneMinusPEqualsAlpha) {
  // p = 0.1, alpha = 0.9: t = 0 and r(0,d) puts exactly alpha on 0.
  const auto spec = ClassSpec::make(20, 0.1);
  const auto closed = var_bounds_mean_closed_form(spec, 0.9);
  const auto scan = var_bounds_scan(mean_rays::enumerate_rays(spec), 0.9);
  EXPECT_EQ(closed.min, scan.var_min);
  EXPECT_EQ(closed.max, scan.var_max);
}

TEST(ClosedForm, RejectsCorrelationClass) {
  EXPECT_EQ(error_kind_of([] { var_bounds_mean_closed_form(ClassSpec::make(10, 0.2, 0.1), 0.9); }),
            ErrorKind::InvalidArgument);
}

TEST(EsBoundsScan, ReferenceMeanOnlyTables) {
  auto es = [](double p, double alpha) { return es_bounds_scan(mean_rays::enumerate_rays(ClassSpec::make(100, p)), alpha); };
  const auto a = es(0.003, 0.9);
  EXPECT_EQ(report::fixed(a.min, 1), "0.3");
  EXPECT_EQ(report::fixed(a.max, 1), "2.0");
  EXPECT_EQ(report::fixed(es(0.003, 0.99).max, 1), "29.0");
  const auto b = es(0.017, 0.99);
  EXPECT_EQ(report::fixed(b.min, 1), "1.7");
  EXPECT_EQ(report::fixed(b.max, 1), "100.0");
  for (double alpha : {0.9, 0.95, 0.99}) {
    const auto c = es(0.266, alpha);
    EXPECT_EQ(report::fixed(c.min, 1), "26.6");
    EXPECT_EQ(report::fixed(c.max, 1), "100.0");
  }
}

TEST(EsEnvelope, AttainmentFlag) {
  const auto bbb = es_envelope(ClassSpec::make(100, 0.017), 0.99);
  EXPECT_TRUE(bbb.upper_attained);
  EXPECT_EQ(bbb.upper, 100.0);
  EXPECT_EQ(bbb.lower, 1.0);
  EXPECT_FALSE(es_envelope(ClassSpec::make(100, 0.003), 0.99).upper_attained);
  EXPECT_TRUE(es_envelope(ClassSpec::make(100, 0.266), 0.9).upper_attained);
}

TEST(EsEnvelope, ContainsRayScanExtrema) {
  for (double p : {0.003, 0.017, 0.266})
    for (double alpha : {0.9, 0.95, 0.99}) {
      const auto spec = ClassSpec::make(100, p);
      const auto rays = mean_rays::enumerate_rays(spec);
      const auto env = es_envelope(spec, rays, alpha);
      const auto scan = es_bounds_scan(rays, alpha);
      EXPECT_LE(env.lower, scan.min);
      EXPECT_GE(env.upper, scan.max - 1e-12);
      // Attained upper bound: the ray scan actually reaches d.
      if (env.upper_attained) {
        EXPECT_NEAR(scan.max, 100.0, 1e-12);
      }
    }
}
