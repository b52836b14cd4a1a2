#pragma once

// VaR and ES bounds over a ray-generated class. VaR is sharp on the rays:
// every member of the class has min_R VaR(R) <= VaR <= max_R VaR(R). For ES
// the proved envelope is [min_R VaR(R), d]; the ray-scan ES extrema are
// reported separately and carry no class-wide guarantee.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"

namespace exchrays {

struct RiskBounds {
  double alpha = 0.0;
  int var_min = 0;
  int var_max = 0;
  double es_min = 0.0;
  double es_max = 0.0;
  Support var_argmin;
  Support var_argmax;
  Support es_argmin;
  Support es_argmax;
};

struct VarBounds {
  int min;
  int max;

  friend bool operator==(const VarBounds&, const VarBounds&) = default;
};

struct EsEnvelope {
  double lower;
  double upper;
  /// True when 1 - p <= alpha: r(0,d) then has ES = d, so the upper bound is attained.
  bool upper_attained;
};

namespace detail {

// Strict "better" with ties resolved towards the lexicographically smaller
// support, so the chosen ray does not depend on scan order.
template <class T>
bool improves(T candidate, T incumbent, const RayDensity& cand_ray, const RayDensity& inc_ray, bool want_less) {
  if (candidate != incumbent) return want_less ? candidate < incumbent : candidate > incumbent;
  return support_less(cand_ray, inc_ray);
}

}  // namespace detail

/// Exact min/max of VaR_alpha over the rays with attaining supports.
inline RiskBounds var_bounds_scan(std::span<const RayDensity> rays, double alpha) {
  check_alpha(alpha);
  if (rays.empty()) throw Error(ErrorKind::EmptyRaySet, "no rays to scan");
  std::size_t imin = 0;
  std::size_t imax = 0;
  int vmin = value_at_risk(rays[0].atoms(), alpha);
  int vmax = vmin;
  for (std::size_t i = 1; i < rays.size(); ++i) {
    const int v = value_at_risk(rays[i].atoms(), alpha);
    if (detail::improves(v, vmin, rays[i], rays[imin], true)) {
      vmin = v;
      imin = i;
    }
    if (detail::improves(v, vmax, rays[i], rays[imax], false)) {
      vmax = v;
      imax = i;
    }
  }
  RiskBounds b;
  b.alpha = alpha;
  b.var_min = vmin;
  b.var_max = vmax;
  b.var_argmin = rays[imin].support();
  b.var_argmax = rays[imax].support();
  return b;
}

struct EsScan {
  double min;
  double max;
  Support argmin;
  Support argmax;
};

inline EsScan es_bounds_scan(std::span<const RayDensity> rays, double alpha) {
  check_alpha(alpha);
  if (rays.empty()) throw Error(ErrorKind::EmptyRaySet, "no rays to scan");
  std::size_t imin = 0;
  std::size_t imax = 0;
  double emin = expected_shortfall(rays[0].atoms(), alpha);
  double emax = emin;
  for (std::size_t i = 1; i < rays.size(); ++i) {
    const double e = expected_shortfall(rays[i].atoms(), alpha);
    if (detail::improves(e, emin, rays[i], rays[imin], true)) {
      emin = e;
      imin = i;
    }
    if (detail::improves(e, emax, rays[i], rays[imax], false)) {
      emax = e;
      imax = i;
    }
  }
  return {emin, emax, rays[imin].support(), rays[imax].support()};
}

/// VaR and ray-scan ES extrema in one record.
inline RiskBounds scan_bounds(std::span<const RayDensity> rays, double alpha) {
  RiskBounds b = var_bounds_scan(rays, alpha);
  EsScan es = es_bounds_scan(rays, alpha);
  b.es_min = es.min;
  b.es_max = es.max;
  b.es_argmin = std::move(es.argmin);
  b.es_argmax = std::move(es.argmax);
  return b;
}

/// Analytic VaR bounds over S(p). With t = (p - (1 - alpha)) d / alpha:
///   t <= 0         -> (0, largest integer strictly below pd / (1 - alpha))
///   0 < t <= j1M   -> (smallest integer >= t, d)
///   t > j1M        -> (j1M + 1, d)
/// At t == 0 the ray r(0,d) puts exactly alpha at 0, so d is not reached and
/// the first branch applies. Boundaries are compared with a 1e-9 guard.
inline VarBounds var_bounds_mean_closed_form(const ClassSpec& spec, double alpha) {
  check_alpha(alpha);
  if (spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "closed-form VaR bounds are for mean-only classes");
  const int d = spec.d();
  const double eps = tolerance::kClosedFormBoundary;
  const double t = (spec.p() - (1.0 - alpha)) * d / alpha;
  if (t <= eps) {
    const double x = spec.pd() / (1.0 - alpha);
    const double n = std::round(x);
    const int below = std::abs(x - n) <= eps ? static_cast<int>(n) - 1 : static_cast<int>(std::floor(x));
    return {0, below};
  }
  if (t <= spec.j1M() + eps) {
    return {std::max(0, static_cast<int>(std::ceil(t - eps))), d};
  }
  return {spec.j1M() + 1, d};
}

/// Proved ES envelope [min_R VaR(R), d] over the given rays.
inline EsEnvelope es_envelope(const ClassSpec& spec, std::span<const RayDensity> rays, double alpha) {
  const RiskBounds b = var_bounds_scan(rays, alpha);
  return {static_cast<double>(b.var_min), static_cast<double>(spec.d()), 1.0 - spec.p() <= alpha};
}

/// Mean-only envelope from the closed-form VaR bound.
inline EsEnvelope es_envelope(const ClassSpec& spec, double alpha) {
  const VarBounds v = var_bounds_mean_closed_form(spec, alpha);
  return {static_cast<double>(v.min), static_cast<double>(spec.d()), 1.0 - spec.p() <= alpha};
}

}  // namespace exchrays
