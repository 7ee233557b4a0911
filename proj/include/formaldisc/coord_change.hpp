#pragma once

#include <utility>

#include "formaldisc/series.hpp"

namespace formaldisc {

/// An element of the group of formal coordinate changes: a series rho with
/// rho(0) = 0 and invertible rho'(0). The group law follows the convention
/// (rho * mu)(t) = mu(rho(t)), which makes the action on coordinates a right
/// action.
class CoordinateChange {
public:
  explicit CoordinateChange(TruncatedSeries s) : series_(std::move(s)) {
    if (series_.truncation_order() < 2)
      throw TruncationBudgetExhausted("CoordinateChange: order too small to validate");
    if (!series_.coeff(0).is_zero())
      throw ValidationError("CoordinateChange: rho(0) != 0");
    if (series_.coeff(1).is_zero())
      throw ValidationError("CoordinateChange: rho'(0) = 0");
  }

  static CoordinateChange identity(int order = kExactOrder) {
    return CoordinateChange(TruncatedSeries::identity(order));
  }
  static CoordinateChange scaling(const Rational& c, int order = kExactOrder) {
    return CoordinateChange(TruncatedSeries::monomial(c, 1, order));
  }

  const TruncatedSeries& series() const { return series_; }
  Rational linear_coefficient() const { return series_.coeff(1); }
  bool is_unipotent() const { return linear_coefficient() == Rational(1); }
  int truncation_order() const { return series_.truncation_order(); }

  friend bool operator==(const CoordinateChange& a, const CoordinateChange& b) {
    return a.series_ == b.series_;
  }
  friend bool operator!=(const CoordinateChange& a, const CoordinateChange& b) {
    return !(a == b);
  }

private:
  TruncatedSeries series_;
};

/// (rho * mu)(t) = mu(rho(t)).
inline CoordinateChange group_compose(const CoordinateChange& rho,
                                      const CoordinateChange& mu) {
  return CoordinateChange(compose(mu.series(), rho.series()));
}

inline CoordinateChange group_inverse(const CoordinateChange& rho) {
  return CoordinateChange(invert_composition(rho.series()));
}

/// rho(t) = unipotent(scale * t) with unipotent'(0) = 1; exact.
inline std::pair<Rational, CoordinateChange> decompose_scaling_unipotent(
    const CoordinateChange& rho) {
  Rational scale = rho.linear_coefficient();
  TruncatedSeries u(rho.truncation_order());
  Rational p(1);
  int prev = 0;
  for (const auto& [d, c] : rho.series().coefficients()) {
    for (; prev < d; ++prev) p = p * scale;
    u.set(d, c / p);
  }
  return {scale, CoordinateChange(std::move(u))};
}

/// A formal vector field v(t) d/dt. The coefficient series is unconstrained;
/// only exponentiation restricts to the positive part.
class Derivation {
public:
  Derivation() = default;
  explicit Derivation(TruncatedSeries coefficient) : coeff_(std::move(coefficient)) {}

  static Derivation zero(int order = kExactOrder) {
    return Derivation(TruncatedSeries::zero(order));
  }

  const TruncatedSeries& coefficient_series() const { return coeff_; }
  int truncation_order() const { return coeff_.truncation_order(); }

  /// True when v vanishes to order >= 2 at the origin (positive part).
  bool is_positive() const {
    return coeff_.truncation_order() >= 2 && coeff_.coeff(0).is_zero() &&
           coeff_.coeff(1).is_zero();
  }

  friend bool operator==(const Derivation& a, const Derivation& b) {
    return a.coeff_ == b.coeff_;
  }
  friend bool operator!=(const Derivation& a, const Derivation& b) { return !(a == b); }

private:
  TruncatedSeries coeff_;
};

/// [u, v] = (u v' - v u') d/dt.
inline Derivation lie_bracket(const Derivation& u, const Derivation& v) {
  const TruncatedSeries& a = u.coefficient_series();
  const TruncatedSeries& b = v.coefficient_series();
  return Derivation(a * derive(b) - b * derive(a));
}

/// The Witt-basis field L_m = -t^{m+1} d/dt, m >= -1.
inline Derivation witt_field(int m, int order = kExactOrder) {
  return Derivation(TruncatedSeries::monomial(Rational(-1), m + 1, order));
}

/// Time-1 flow of v as a coordinate change, via the Lie series
/// exp(v d/dt) t = sum_k (1/k!) (v d/dt)^k t. Requires v in the positive
/// part (or zero): the flow coefficient at each degree then depends only on
/// coefficients of v of the same degree or lower, so the order is preserved.
inline CoordinateChange exp_derivation(const Derivation& v, int order = -1) {
  const TruncatedSeries& vc = v.coefficient_series();
  if (order < 0) order = vc.truncation_order();
  if (vc.truncation_order() == 0)
    throw TruncationBudgetExhausted("exp_derivation: v(0) unknown");
  if (!vc.coeff(0).is_zero())
    throw NotExponentiable("exp_derivation: translation direction (v(0) != 0) does not "
                           "preserve the origin");
  if (vc.is_zero()) return CoordinateChange::identity(order);
  if (vc.truncation_order() >= 2 && !vc.coeff(1).is_zero())
    throw NotExponentiable("exp_derivation: scaling direction exponentiates to an "
                           "irrational scale factor; supply scalings as coordinate "
                           "changes directly");
  if (order == kExactOrder)
    throw std::invalid_argument("exp_derivation: flow of a nonzero field is an "
                                "infinite series; pass a finite order");

  TruncatedSeries vpoly = vc.as_exact_polynomial().truncated(order).as_exact_polynomial();
  TruncatedSeries term = TruncatedSeries::identity();
  TruncatedSeries sum = term;
  Rational kfact(1);
  for (int k = 1;; ++k) {
    term = (vpoly * derive(term)).truncated(order).as_exact_polynomial();
    if (term.is_zero()) break;
    kfact *= Rational(k);
    sum = sum + term.scaled(Rational(1) / kfact);
  }
  return CoordinateChange(sum.truncated(order));
}

/// Inverse of exp_derivation on the unipotent subgroup: v with
/// exp_derivation(v) = rho up to the truncation order.
inline Derivation log_coordinate_change(const CoordinateChange& rho) {
  if (!rho.is_unipotent())
    throw NotUnipotent("log_coordinate_change: rho'(0) != 1");
  int order = rho.truncation_order();
  if (order == kExactOrder) {
    if (rho.series().top_degree() > 1)
      throw std::invalid_argument("log_coordinate_change: pass a truncated input");
    return Derivation::zero();
  }
  TruncatedSeries v;  // exact polynomial built degree by degree
  for (int d = 2; d < order; ++d) {
    TruncatedSeries flow =
        exp_derivation(Derivation(v.truncated(d + 1)), d + 1).series();
    v.set(d, rho.series().coeff(d) - flow.coeff(d));
  }
  return Derivation(v.truncated(order));
}

}  // namespace formaldisc
