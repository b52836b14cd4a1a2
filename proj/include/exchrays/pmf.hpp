#pragma once

// Distributions of the number of defaults S_d in a portfolio of d obligors,
// the exchangeable <-> count bijection, moments, VaR and ES.

#include <cmath>
#include <concepts>
#include <limits>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exchrays/errors.hpp"
#include "exchrays/numeric.hpp"

namespace exchrays {

/// One point of a discrete distribution on {0..d}.
struct Atom {
  int index;
  double mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

template <class R>
concept AtomRange = std::ranges::forward_range<R> && requires(std::ranges::range_value_t<R> a) {
  { a.index } -> std::convertible_to<int>;
  { a.mass } -> std::convertible_to<double>;
};

/// pmf of S_d: probs[j] = P(S_d = j), j = 0..d.
class DefaultCountPmf {
 public:
  /// Checks the invariants and returns the pmf. Masses in [-1e-12, 0) are
  /// clamped to zero.
  static DefaultCountPmf validate(int d, std::vector<double> probs) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
    if (probs.size() != static_cast<std::size_t>(d) + 1) {
      throw Error(ErrorKind::LengthMismatch,
                  "expected " + std::to_string(d + 1) + " entries, got " + std::to_string(probs.size()));
    }
    detail::CompensatedSum total;
    for (std::size_t j = 0; j < probs.size(); ++j) {
      double& x = probs[j];
      if (!std::isfinite(x)) throw Error(ErrorKind::NotNormalized, "non-finite mass at j=" + std::to_string(j));
      if (x < -tolerance::kNegativeMass) {
        throw Error(ErrorKind::NegativeMass, "mass " + std::to_string(x) + " at j=" + std::to_string(j));
      }
      if (x < 0.0) x = 0.0;
      total += x;
    }
    if (std::abs(total.value() - 1.0) > tolerance::kNormalization) {
      throw Error(ErrorKind::NotNormalized, "masses sum to " + std::to_string(total.value()));
    }
    return DefaultCountPmf(std::move(probs));
  }

  static DefaultCountPmf validate(std::vector<double> probs) {
    const int d = static_cast<int>(probs.size()) - 1;
    return validate(d, std::move(probs));
  }

  int d() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](int j) const { return probs_.at(static_cast<std::size_t>(j)); }

  /// Dense view as atoms (index, mass), including zero masses.
  auto atoms() const {
    return std::views::iota(0, static_cast<int>(probs_.size())) |
           std::views::transform([this](int j) { return Atom{j, probs_[static_cast<std::size_t>(j)]}; });
  }

 private:
  explicit DefaultCountPmf(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

/// Common pmf value f_i of every binary vector with exactly i ones.
class ExchangeablePmfSummary {
 public:
  static ExchangeablePmfSummary validate(int d, std::vector<double> f) {
    if (d < 1) throw Error(ErrorKind::InvalidArgument, "d must be >= 1");
    if (f.size() != static_cast<std::size_t>(d) + 1) {
      throw Error(ErrorKind::LengthMismatch,
                  "expected " + std::to_string(d + 1) + " entries, got " + std::to_string(f.size()));
    }
    detail::CompensatedSum total;
    for (int i = 0; i <= d; ++i) {
      double& x = f[static_cast<std::size_t>(i)];
      if (x < -tolerance::kNegativeMass) {
        throw Error(ErrorKind::NegativeMass, "f_" + std::to_string(i) + " = " + std::to_string(x));
      }
      if (x < 0.0) x = 0.0;
      if (x > 0.0) total += std::exp(log_binomial(d, i) + std::log(x));
    }
    if (std::abs(total.value() - 1.0) > tolerance::kSummaryNormalization) {
      throw Error(ErrorKind::NotNormalized, "sum_i C(d,i) f_i = " + std::to_string(total.value()));
    }
    return ExchangeablePmfSummary(std::move(f));
  }

  int d() const noexcept { return static_cast<int>(f_.size()) - 1; }
  std::span<const double> values() const noexcept { return f_; }
  double operator[](int i) const { return f_.at(static_cast<std::size_t>(i)); }

 private:
  friend ExchangeablePmfSummary from_count_pmf(const DefaultCountPmf&);
  explicit ExchangeablePmfSummary(std::vector<double> f) : f_(std::move(f)) {}
  std::vector<double> f_;
};

/// p_j = C(d,j) f_j.
inline DefaultCountPmf to_count_pmf(const ExchangeablePmfSummary& f) {
  const int d = f.d();
  std::vector<double> probs(static_cast<std::size_t>(d) + 1, 0.0);
  for (int j = 0; j <= d; ++j) {
    const double fj = f[j];
    if (fj == 0.0) continue;
    const double v = d <= 50 ? binomial(d, j) * fj : std::exp(log_binomial(d, j) + std::log(fj));
    if (!std::isfinite(v)) throw Error(ErrorKind::Overflow, "C(d,j) f_j overflowed at j=" + std::to_string(j));
    probs[static_cast<std::size_t>(j)] = v;
  }
  return DefaultCountPmf::validate(d, std::move(probs));
}

/// f_i = p_i / C(d,i).
inline ExchangeablePmfSummary from_count_pmf(const DefaultCountPmf& pmf) {
  const int d = pmf.d();
  std::vector<double> f(static_cast<std::size_t>(d) + 1, 0.0);
  for (int i = 0; i <= d; ++i) {
    const double pi = pmf[i];
    if (pi == 0.0) continue;
    f[static_cast<std::size_t>(i)] = d <= 50 ? pi / binomial(d, i) : std::exp(std::log(pi) - log_binomial(d, i));
  }
  return ExchangeablePmfSummary(std::move(f));
}

template <AtomRange R>
double mean(const R& atoms) {
  detail::CompensatedSum s;
  for (const auto& a : atoms) s += a.index * a.mass;
  return s.value();
}

inline double mean(const DefaultCountPmf& pmf) { return mean(pmf.atoms()); }

template <AtomRange R>
double raw_second_moment(const R& atoms) {
  detail::CompensatedSum s;
  for (const auto& a : atoms) s += static_cast<double>(a.index) * a.index * a.mass;
  return s.value();
}

inline double raw_second_moment(const DefaultCountPmf& pmf) { return raw_second_moment(pmf.atoms()); }

/// mu_order = sum_k [k]_order / [d]_order p_k, the cross moment
/// E[X_1 ... X_order] of the exchangeable indicators.
template <AtomRange R>
double cross_moment(const R& atoms, int d, int order) {
  if (order < 1 || order > d) {
    throw Error(ErrorKind::OrderOutOfRange,
                "order " + std::to_string(order) + " outside 1.." + std::to_string(d));
  }
  detail::CompensatedSum s;
  for (const auto& a : atoms) s += falling_factorial_ratio(a.index, d, order) * a.mass;
  return s.value();
}

inline double cross_moment(const DefaultCountPmf& pmf, int order) {
  return cross_moment(pmf.atoms(), pmf.d(), order);
}

/// rho = (mu2 - p^2) / (p (1 - p)).
inline double correlation_from_mu2(double mu2, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DegenerateMarginal, "p must lie strictly inside (0,1)");
  return (mu2 - p * p) / (p * (1.0 - p));
}

inline double correlation(const DefaultCountPmf& pmf, double p) {
  if (pmf.d() < 2) throw Error(ErrorKind::OrderOutOfRange, "correlation needs d >= 2");
  return correlation_from_mu2(cross_moment(pmf, 2), p);
}

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "confidence level must lie in (0,1), got " + std::to_string(alpha));
  }
}

/// Lower alpha-quantile inf{k : P(S <= k) >= alpha} over atoms sorted by
/// index. The CDF is accumulated with compensated summation and compared
/// with an absolute tie tolerance, so an exact boundary mass resolves to >=.
template <AtomRange R>
int value_at_risk(const R& atoms, double alpha) {
  check_alpha(alpha);
  detail::CompensatedSum cdf;
  int last = 0;
  for (const auto& a : atoms) {
    cdf += a.mass;
    last = a.index;
    if (a.mass > 0.0 && cdf.value() >= alpha - tolerance::kCdfTie) return a.index;
  }
  return last;
}

inline int value_at_risk(const DefaultCountPmf& pmf, double alpha) { return value_at_risk(pmf.atoms(), alpha); }

/// E[S | S >= VaR_alpha(S)], the conditional tail expectation.
template <AtomRange R>
double expected_shortfall(const R& atoms, double alpha) {
  const int v = value_at_risk(atoms, alpha);
  detail::CompensatedSum num;
  detail::CompensatedSum den;
  for (const auto& a : atoms) {
    if (a.index < v) continue;
    num += a.index * a.mass;
    den += a.mass;
  }
  if (!(den.value() > 0.0)) throw Error(ErrorKind::Internal, "empty tail above VaR");
  return num.value() / den.value();
}

inline double expected_shortfall(const DefaultCountPmf& pmf, double alpha) {
  return expected_shortfall(pmf.atoms(), alpha);
}

}  // namespace exchrays
