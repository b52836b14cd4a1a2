#pragma once

// Extremal rays of S(p): pmfs on {0..d} with mean pd. Every ray has at most
// two atoms, j1 <= j1M < pd < j2m <= j2, plus the unit mass at pd when pd is
// an integer.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"

namespace exchrays::mean_rays {

inline void require_mean_only(const ClassSpec& spec) {
  if (spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "expected a mean-only class (no rho)");
}

/// Masses (j2 - pd)/(j2 - j1) at j1 and (pd - j1)/(j2 - j1) at j2.
inline RayDensity two_point_ray(const ClassSpec& spec, int j1, int j2) {
  if (j1 < 0 || j1 > spec.j1M() || j2 < spec.j2m() || j2 > spec.d()) {
    throw Error(ErrorKind::IndexOutOfRange, "two-point ray needs 0 <= j1 <= " + std::to_string(spec.j1M()) + " and " +
                                                std::to_string(spec.j2m()) + " <= j2 <= d, got (" +
                                                std::to_string(j1) + "," + std::to_string(j2) + ")");
  }
  const double pd = spec.pd();
  const double width = static_cast<double>(j2 - j1);
  const std::array<Atom, 2> atoms{Atom{j1, (j2 - pd) / width}, Atom{j2, (pd - j1) / width}};
  return make_ray_unchecked(spec, atoms);
}

inline RayDensity point_ray(const ClassSpec& spec) {
  if (!spec.pd_integer()) {
    throw Error(ErrorKind::NonIntegerMean, "pd = " + std::to_string(spec.pd()) + " is not an integer");
  }
  const std::array<Atom, 1> atoms{Atom{static_cast<int>(spec.pd()), 1.0}};
  return make_ray_unchecked(spec, atoms);
}

/// (j1M + 1)(d - j1M) for non-integer pd, d^2 p (1 - p) + 1 otherwise.
inline std::int64_t ray_count(const ClassSpec& spec) {
  const std::int64_t d = spec.d();
  if (spec.pd_integer()) {
    const auto k = static_cast<std::int64_t>(spec.pd());
    return k * (d - k) + 1;
  }
  const std::int64_t j1M = spec.j1M();
  return (j1M + 1) * (d - j1M);
}

/// All rays in lexicographic (j1, j2) order; the point ray, if any, is last.
inline std::vector<RayDensity> enumerate_rays(const ClassSpec& spec) {
  require_mean_only(spec);
  const ClassSpec& base = spec;
  std::vector<RayDensity> rays;
  rays.reserve(static_cast<std::size_t>(ray_count(base)));
  for (int j1 = 0; j1 <= base.j1M(); ++j1)
    for (int j2 = base.j2m(); j2 <= base.d(); ++j2) rays.push_back(two_point_ray(base, j1, j2));
  if (base.pd_integer()) rays.push_back(point_ray(base));
  return rays;
}

struct WeightedRay {
  RayDensity ray;
  double weight;
};

/// Writes a pmf of S(p) as a convex combination of rays by greedy residual
/// pairing: peel the atom at pd (integer case), then repeatedly pair the
/// smallest positive residual below pd with the smallest one above it and
/// remove as much of that two-point ray as both residuals allow. Each step
/// exhausts at least one residual, so at most d + 1 rays are used.
inline std::vector<WeightedRay> decompose(const DefaultCountPmf& pmf, const ClassSpec& spec) {
  if (pmf.d() != spec.d()) throw Error(ErrorKind::LengthMismatch, "pmf and class have different d");
  const ClassSpec base = spec.mean_only();
  const double m = mean(pmf);
  if (std::abs(m - base.pd()) > base.mean_tolerance()) {
    throw Error(ErrorKind::MeanMismatch, "pmf mean " + std::to_string(m) + " differs from pd " +
                                             std::to_string(base.pd()));
  }

  const int d = base.d();
  const double pd = base.pd();
  std::vector<double> residual(pmf.probs().begin(), pmf.probs().end());
  // Residuals this small are rounding debris left by the subtraction.
  constexpr double kDust = 1e-15;

  std::vector<WeightedRay> out;
  if (base.pd_integer()) {
    const auto k = static_cast<std::size_t>(pd);
    if (residual[k] > 0.0) out.push_back({point_ray(base), residual[k]});
    residual[k] = 0.0;
  }

  int lo = 0;
  int hi = base.j2m();
  auto advance = [&](int& j, int end) {
    while (j <= end && residual[static_cast<std::size_t>(j)] <= kDust) ++j;
  };
  advance(lo, base.j1M());
  advance(hi, d);
  while (lo <= base.j1M() && hi <= d) {
    const double width = static_cast<double>(hi - lo);
    const double w_lo = (hi - pd) / width;
    const double w_hi = (pd - lo) / width;
    double& r_lo = residual[static_cast<std::size_t>(lo)];
    double& r_hi = residual[static_cast<std::size_t>(hi)];
    const double lambda = std::min(r_lo / w_lo, r_hi / w_hi);
    out.push_back({two_point_ray(base, lo, hi), lambda});
    if (r_lo / w_lo <= r_hi / w_hi) {
      r_lo = 0.0;
      r_hi -= lambda * w_hi;
    } else {
      r_hi = 0.0;
      r_lo -= lambda * w_lo;
    }
    advance(lo, base.j1M());
    advance(hi, d);
  }
  return out;
}

/// Sum of weight * ray, as a dense vector of length d + 1.
inline std::vector<double> reconstruct(const std::vector<WeightedRay>& parts, int d) {
  std::vector<detail::CompensatedSum> acc(static_cast<std::size_t>(d) + 1);
  for (const auto& [ray, w] : parts)
    for (const Atom& a : ray.atoms()) acc[static_cast<std::size_t>(a.index)] += w * a.mass;
  std::vector<double> out;
  out.reserve(acc.size());
  for (const auto& s : acc) out.push_back(s.value());
  return out;
}

struct MomentBounds {
  double min;
  double max;
  RayDensity argmin;
  RayDensity argmax;
};

/// Extremes of cross_moment(., order) over a ray set; ties go to the first
/// ray in the given order.
inline MomentBounds moment_range_scan(const std::vector<RayDensity>& rays, int order) {
  if (rays.empty()) throw Error(ErrorKind::EmptyRaySet, "no rays to scan");
  const int d = rays.front().d();
  std::size_t imin = 0;
  std::size_t imax = 0;
  double vmin = cross_moment(rays[0].atoms(), d, order);
  double vmax = vmin;
  for (std::size_t i = 1; i < rays.size(); ++i) {
    const double v = cross_moment(rays[i].atoms(), d, order);
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  return {vmin, vmax, rays[imin], rays[imax]};
}

/// Closed form for mu2 (order 2); a ray scan for higher orders.
///   max mu2 = p, attained by r(0,d)
///   min mu2 = [-j1M(j1M+1) + (2 j1M + 1) pd - pd] / (d(d-1)) on r(j1M, j1M+1)
///           = p (pd - 1)/(d - 1) on the point ray when pd is an integer
inline MomentBounds moment_bounds(const ClassSpec& spec, int order) {
  require_mean_only(spec);
  const int d = spec.d();
  if (order < 2 || order > d) {
    throw Error(ErrorKind::OrderOutOfRange, "order must lie in 2..d, got " + std::to_string(order));
  }
  if (order > 2) return moment_range_scan(enumerate_rays(spec), order);

  const double pd = spec.pd();
  const double dd1 = static_cast<double>(d) * (d - 1);
  RayDensity argmax = two_point_ray(spec, 0, d);
  if (spec.pd_integer()) {
    return {spec.p() * (pd - 1.0) / (d - 1.0), spec.p(), point_ray(spec), argmax};
  }
  const double j = spec.j1M();
  const double min = (-j * (j + 1.0) + (2.0 * j + 1.0) * pd - pd) / dd1;
  return {min, spec.p(), two_point_ray(spec, spec.j1M(), spec.j1M() + 1), argmax};
}

struct CorrelationBounds {
  double min;
  double max;
};

inline CorrelationBounds correlation_bounds(const ClassSpec& spec) {
  if (spec.d() < 2) throw Error(ErrorKind::OrderOutOfRange, "correlation bounds need d >= 2");
  const MomentBounds mu2 = moment_bounds(spec.mean_only(), 2);
  return {correlation_from_mu2(mu2.min, spec.p()), 1.0};
}

}  // namespace exchrays::mean_rays
