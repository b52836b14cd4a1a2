#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exchrays/class_spec.hpp"
#include "exchrays/errors.hpp"
#include "exchrays/pmf.hpp"

namespace exchrays {

/// Which class a ray generates: mean-only S(p) or mean and correlation S(p, rho).
struct ClassTag {
  double p;
  std::optional<double> rho;

  static ClassTag of(const ClassSpec& spec) { return {spec.p(), spec.rho()}; }
  bool mean_only() const noexcept { return !rho.has_value(); }
};

using Support = std::vector<int>;

/// An extremal ray density: a pmf on {0..d} with one to three atoms.
class RayDensity {
 public:
  static constexpr std::size_t kMaxAtoms = 3;

  /// Builds a ray from atoms with strictly increasing indices and checks the
  /// moment constraints of `spec`.
  static RayDensity make(const ClassSpec& spec, std::span<const Atom> atoms) {
    RayDensity r = make_unchecked(spec, atoms);
    r.check_against(spec);
    return r;
  }

  int d() const noexcept { return d_; }
  const ClassTag& tag() const noexcept { return tag_; }
  std::span<const Atom> atoms() const noexcept { return {atoms_.data(), size_}; }
  std::size_t size() const noexcept { return size_; }

  Support support() const {
    Support s;
    s.reserve(size_);
    for (const Atom& a : atoms()) s.push_back(a.index);
    return s;
  }

  /// Mass at index j (zero off the support).
  double mass_at(int j) const noexcept {
    for (const Atom& a : atoms())
      if (a.index == j) return a.mass;
    return 0.0;
  }

  DefaultCountPmf to_pmf() const {
    std::vector<double> probs(static_cast<std::size_t>(d_) + 1, 0.0);
    for (const Atom& a : atoms()) probs[static_cast<std::size_t>(a.index)] = a.mass;
    return DefaultCountPmf::validate(d_, std::move(probs));
  }

  /// "j1:m1;j2:m2" with masses at 17 significant digits.
  std::string to_sparse_string() const;

  /// Lexicographic order of supports.
  friend bool support_less(const RayDensity& a, const RayDensity& b) {
    return std::ranges::lexicographical_compare(a.atoms(), b.atoms(),
                                                [](const Atom& x, const Atom& y) { return x.index < y.index; });
  }

  friend bool same_support(const RayDensity& a, const RayDensity& b) {
    return std::ranges::equal(a.atoms(), b.atoms(), [](const Atom& x, const Atom& y) { return x.index == y.index; });
  }

 private:
  friend RayDensity make_ray_unchecked(const ClassSpec&, std::span<const Atom>);

  static RayDensity make_unchecked(const ClassSpec& spec, std::span<const Atom> atoms) {
    if (atoms.empty() || atoms.size() > kMaxAtoms) {
      throw Error(ErrorKind::InvalidArgument, "a ray has 1 to 3 atoms, got " + std::to_string(atoms.size()));
    }
    RayDensity r;
    r.d_ = spec.d();
    r.tag_ = ClassTag::of(spec);
    r.size_ = atoms.size();
    std::ranges::copy(atoms, r.atoms_.begin());
    return r;
  }

  void check_against(const ClassSpec& spec) const {
    detail::CompensatedSum total;
    int prev = -1;
    for (const Atom& a : atoms()) {
      if (a.index <= prev || a.index > d_) {
        throw Error(ErrorKind::IndexOutOfRange, "ray support must be strictly increasing within 0..d");
      }
      if (!(a.mass > 0.0)) throw Error(ErrorKind::NegativeMass, "ray masses must be positive");
      prev = a.index;
      total += a.mass;
    }
    if (std::abs(total.value() - 1.0) > tolerance::kRayMass) {
      throw Error(ErrorKind::NotNormalized, "ray masses sum to " + std::to_string(total.value()));
    }
    if (std::abs(mean(atoms()) - spec.pd()) > tolerance::kRayMeanPerD * d_) {
      throw Error(ErrorKind::MeanMismatch, "ray mean differs from pd");
    }
    if (auto m2 = spec.second_moment_target()) {
      if (std::abs(raw_second_moment(atoms()) - *m2) > spec.second_moment_tolerance()) {
        throw Error(ErrorKind::InfeasibleMoment, "ray second moment differs from the target");
      }
    }
  }

  int d_ = 0;
  ClassTag tag_{0.0, std::nullopt};
  std::array<Atom, kMaxAtoms> atoms_{};
  std::size_t size_ = 0;
};

/// Internal constructor for enumerators that have already established the
/// invariants analytically.
inline RayDensity make_ray_unchecked(const ClassSpec& spec, std::span<const Atom> atoms) {
  return RayDensity::make_unchecked(spec, atoms);
}

inline std::string RayDensity::to_sparse_string() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < size_; ++i) {
    std::snprintf(buf, sizeof buf, "%s%d:%.17g", i ? ";" : "", atoms_[i].index, atoms_[i].mass);
    out += buf;
  }
  return out;
}

}  // namespace exchrays
