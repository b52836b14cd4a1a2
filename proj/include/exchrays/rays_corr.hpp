#pragma once

// Extremal rays of S(p, rho): pmfs on {0..d} with mean pd and second moment
// E[S^2] = pd + d(d-1) mu2. The constraint matrix has rank 2, so every ray
// has at most three atoms. Three-atom rays come from the closed-form
// solution on a support i < j < k; two-atom rays are exactly the rays of
// S(p) whose second moment matches; a single atom occurs only when both
// constraints pin it.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"
#include "exchrays/ray.hpp"
#include "exchrays/rays_mean.hpp"

namespace exchrays::corr_rays {

/// Coefficients of the homogeneous system
///   sum_j alpha_j p_j = 0,  alpha_j = j - pd
///   sum_j beta_j  p_j = 0,  beta_j  = j^2 - (pd + d(d-1) mu2)
struct CorrSystemCoeffs {
  std::vector<double> alphas;
  std::vector<double> betas;

  static CorrSystemCoeffs of(const ClassSpec& spec) {
    if (!spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "class has no correlation constraint");
    const double pd = spec.pd();
    const double target = *spec.second_moment_target();
    CorrSystemCoeffs c;
    c.alphas.reserve(static_cast<std::size_t>(spec.d()) + 1);
    c.betas.reserve(static_cast<std::size_t>(spec.d()) + 1);
    for (int j = 0; j <= spec.d(); ++j) {
      c.alphas.push_back(j - pd);
      c.betas.push_back(static_cast<double>(j) * j - target);
    }
    return c;
  }
};

namespace detail {

// Second-moment agreement required before a two-point ray of S(p) is taken
// as a ray of S(p, rho). Far tighter than the membership tolerance, far
// looser than the rounding in -j1 j2 + (j1 + j2) pd.
inline constexpr double kTwoPointMatchPerD2 = 1e-12;

inline bool second_moment_matches(const ClassSpec& spec, double second_moment) {
  const double d = spec.d();
  return std::abs(second_moment - *spec.second_moment_target()) <= kTwoPointMatchPerD2 * d * d;
}

// Rebuilds a degenerate (one- or two-atom) solution from the mean-only
// formulas so that every route to the same support yields identical masses.
inline std::optional<RayDensity> canonical_degenerate(const ClassSpec& spec, std::span<const Atom> atoms) {
  const ClassSpec base = spec.mean_only();
  if (atoms.size() == 1) {
    if (!base.pd_integer() || atoms[0].index != static_cast<int>(base.pd())) return std::nullopt;
    return make_ray_unchecked(spec, atoms);
  }
  const int j1 = atoms[0].index;
  const int j2 = atoms[1].index;
  if (j1 > base.j1M() || j2 < base.j2m()) return std::nullopt;
  const RayDensity r = mean_rays::two_point_ray(base, j1, j2);
  return make_ray_unchecked(spec, r.atoms());
}

}  // namespace detail

/// Closed-form solution on the support {i, j, k}:
///   p_i =  [jk - (j+k-1) pd + d(d-1) mu2] / ((k-i)(j-i))
///   p_j = -[ik - (i+k-1) pd + d(d-1) mu2] / ((k-j)(j-i))
///   p_k =  [ij - (i+j-1) pd + d(d-1) mu2] / ((k-j)(k-i))
/// These are the Lagrange basis polynomials at the nodes evaluated in
/// expectation, so they already sum to one. Returns nothing when a mass is
/// below -1e-12; masses within 1e-12 of zero are dropped and the ray is
/// reported on the remaining support.
inline std::optional<RayDensity> triple_ray(const ClassSpec& spec, int i, int j, int k) {
  if (!spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "class has no correlation constraint");
  if (!(0 <= i && i < j && j < k && k <= spec.d())) {
    throw Error(ErrorKind::IndexOutOfRange, "need 0 <= i < j < k <= d");
  }
  const double pd = spec.pd();
  const double c = static_cast<double>(spec.d()) * (spec.d() - 1) * *spec.mu2_target();
  const double di = i, dj = j, dk = k;
  std::array<Atom, 3> atoms{
      Atom{i, (dj * dk - (dj + dk - 1.0) * pd + c) / ((dk - di) * (dj - di))},
      Atom{j, -(di * dk - (di + dk - 1.0) * pd + c) / ((dk - dj) * (dj - di))},
      Atom{k, (di * dj - (di + dj - 1.0) * pd + c) / ((dk - dj) * (dk - di))},
  };

  std::array<Atom, 3> kept{};
  std::size_t n = 0;
  double total = 0.0;
  for (const Atom& a : atoms) {
    if (a.mass < -tolerance::kRayMass) return std::nullopt;
    if (a.mass <= tolerance::kRayMass) continue;
    kept[n++] = a;
    total += a.mass;
  }
  if (n == 0) return std::nullopt;
  if (n < 3) return detail::canonical_degenerate(spec, std::span<const Atom>(kept.data(), n));
  for (std::size_t t = 0; t < n; ++t) kept[t].mass /= total;
  return make_ray_unchecked(spec, std::span<const Atom>(kept.data(), n));
}

/// Throws InfeasibleMoment unless mu2 lies inside the S(p) bounds.
inline void check_feasible(const ClassSpec& spec) {
  const auto bounds = mean_rays::moment_bounds(spec.mean_only(), 2);
  const double mu2 = *spec.mu2_target();
  constexpr double kSlack = 1e-12;
  if (mu2 < bounds.min - kSlack || mu2 > bounds.max + kSlack) {
    throw Error(ErrorKind::InfeasibleMoment, "mu2 = " + std::to_string(mu2) + " outside admissible range [" +
                                                 std::to_string(bounds.min) + ", " + std::to_string(bounds.max) +
                                                 "] (rho = " + std::to_string(*spec.rho()) + ")");
  }
}

struct EnumerationStats {
  std::size_t triples_scanned = 0;
  std::size_t triples_accepted = 0;  // before deduplication
  std::size_t rays = 0;
};

/// All rays of S(p, rho), deduplicated by support and sorted
/// lexicographically. The triple scan is split over `jobs` threads by the
/// outer index; the result does not depend on `jobs`.
inline std::vector<RayDensity> enumerate_rays(const ClassSpec& spec, unsigned jobs = 0,
                                              EnumerationStats* stats = nullptr) {
  if (!spec.has_rho()) throw Error(ErrorKind::InvalidArgument, "class has no correlation constraint");
  check_feasible(spec);
  const int d = spec.d();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(d + 1));

  // Worker w takes outer indices i = w, w + jobs, ... so the (cheap) large-i
  // rows are spread evenly.
  std::vector<std::vector<RayDensity>> parts(jobs);
  std::vector<std::size_t> scanned(jobs, 0);
  auto work = [&](unsigned w) {
    for (int i = static_cast<int>(w); i <= d - 2; i += static_cast<int>(jobs))
      for (int j = i + 1; j < d; ++j)
        for (int k = j + 1; k <= d; ++k) {
          ++scanned[w];
          if (auto r = triple_ray(spec, i, j, k)) parts[w].push_back(*r);
        }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::vector<RayDensity> rays;
  for (auto& part : parts) rays.insert(rays.end(), part.begin(), part.end());
  const std::size_t accepted = rays.size();

  for (const RayDensity& r : mean_rays::enumerate_rays(spec.mean_only())) {
    if (!detail::second_moment_matches(spec, raw_second_moment(r.atoms()))) continue;
    if (auto c = detail::canonical_degenerate(spec, r.atoms())) rays.push_back(*c);
  }

  std::ranges::stable_sort(rays, [](const RayDensity& a, const RayDensity& b) { return support_less(a, b); });
  auto dup = std::ranges::unique(rays, [](const RayDensity& a, const RayDensity& b) { return same_support(a, b); });
  rays.erase(dup.begin(), dup.end());

  if (stats) {
    stats->triples_scanned = 0;
    for (auto s : scanned) stats->triples_scanned += s;
    stats->triples_accepted = accepted;
    stats->rays = rays.size();
  }
  return rays;
}

struct Membership {
  bool member;
  double mean_residual;           // sum_j (j - pd) p_j
  double second_moment_residual;  // sum_j (j^2 - E[S^2]) p_j
};

inline Membership membership(const DefaultCountPmf& pmf, const ClassSpec& spec) {
  if (pmf.d() != spec.d()) throw Error(ErrorKind::LengthMismatch, "pmf and class have different d");
  const CorrSystemCoeffs coeffs = CorrSystemCoeffs::of(spec);
  exchrays::detail::CompensatedSum r1;
  exchrays::detail::CompensatedSum r2;
  for (int j = 0; j <= spec.d(); ++j) {
    r1 += coeffs.alphas[static_cast<std::size_t>(j)] * pmf[j];
    r2 += coeffs.betas[static_cast<std::size_t>(j)] * pmf[j];
  }
  const bool ok = std::abs(r1.value()) <= spec.mean_tolerance() &&
                  std::abs(r2.value()) <= spec.second_moment_tolerance();
  return {ok, r1.value(), r2.value()};
}

}  // namespace exchrays::corr_rays
