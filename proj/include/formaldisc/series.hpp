#pragma once

#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "formaldisc/errors.hpp"
#include "formaldisc/rational.hpp"

namespace formaldisc {

/// Order value meaning "all coefficients known" (exact polynomials).
inline constexpr int kExactOrder = std::numeric_limits<int>::max();

/// Default cap on Laurent principal depth used by pullback expansions.
inline constexpr int kDefaultLaurentDepth = 16;

/// Formal power series known exactly below its truncation order.
/// Degrees at or above truncation_order are unknown, not zero; binary
/// operations take the minimum order and the derivative lowers it by one.
class TruncatedSeries {
public:
  TruncatedSeries() : order_(kExactOrder) {}
  explicit TruncatedSeries(int order) : order_(order) {}

  static TruncatedSeries zero(int order = kExactOrder) { return TruncatedSeries(order); }
  static TruncatedSeries constant(const Rational& c, int order = kExactOrder) {
    TruncatedSeries s(order);
    s.set(0, c);
    return s;
  }
  static TruncatedSeries monomial(const Rational& c, int deg, int order = kExactOrder) {
    TruncatedSeries s(order);
    s.set(deg, c);
    return s;
  }
  /// The series t (exact).
  static TruncatedSeries identity(int order = kExactOrder) {
    return monomial(Rational(1), 1, order);
  }

  int truncation_order() const { return order_; }
  bool is_exact() const { return order_ == kExactOrder; }
  const std::map<int, Rational>& coefficients() const { return coeffs_; }

  bool is_zero() const { return coeffs_.empty(); }

  /// Smallest degree with a nonzero coefficient; order_ if none stored.
  int low_degree() const { return coeffs_.empty() ? order_ : coeffs_.begin()->first; }
  int top_degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  void set(int deg, const Rational& c) {
    if (deg < 0) throw std::invalid_argument("TruncatedSeries: negative degree");
    if (deg >= order_) return;  // unknown region; nothing to record
    if (c.is_zero())
      coeffs_.erase(deg);
    else
      coeffs_[deg] = c;
  }

  /// Coefficient at degree d. Asking at or above the truncation order is a
  /// contract violation, not zero.
  Rational coeff(int d) const {
    if (d >= order_)
      throw TruncationBudgetExhausted("coefficient at degree " + std::to_string(d) +
                                      " is beyond truncation order " + order_string());
    auto it = coeffs_.find(d);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  TruncatedSeries truncated(int order) const {
    if (order >= order_) return *this;
    TruncatedSeries r(order);
    for (const auto& [d, c] : coeffs_)
      if (d < order) r.coeffs_.emplace(d, c);
    return r;
  }

  /// Same coefficients, order promoted to exact; only for use inside
  /// recursions that manage truncation themselves.
  TruncatedSeries as_exact_polynomial() const {
    TruncatedSeries r;
    r.coeffs_ = coeffs_;
    return r;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(std::min(a.order_, b.order_));
    for (const auto& [d, c] : a.coeffs_)
      if (d < r.order_) r.coeffs_.emplace(d, c);
    for (const auto& [d, c] : b.coeffs_) {
      if (d >= r.order_) continue;
      auto [it, fresh] = r.coeffs_.emplace(d, c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) r.coeffs_.erase(it);
      }
    }
    return r;
  }

  friend TruncatedSeries operator-(const TruncatedSeries& a) {
    TruncatedSeries r = a;
    for (auto& [d, c] : r.coeffs_) c = -c;
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a + (-b);
  }

  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    TruncatedSeries r(std::min(a.order_, b.order_));
    for (const auto& [da, ca] : a.coeffs_) {
      if (da >= r.order_) break;
      for (const auto& [db, cb] : b.coeffs_) {
        if (da + db >= r.order_) break;
        auto [it, fresh] = r.coeffs_.emplace(da + db, ca * cb);
        if (!fresh) it->second += ca * cb;
      }
    }
    r.drop_zeros();
    return r;
  }

  TruncatedSeries scaled(const Rational& c) const {
    TruncatedSeries r(order_);
    if (c.is_zero()) return r;
    for (const auto& [d, v] : coeffs_) r.coeffs_.emplace(d, v * c);
    return r;
  }

  /// Divides by t^k; every stored degree must be >= k.
  TruncatedSeries shifted_down(int k) const {
    TruncatedSeries r(order_ == kExactOrder ? kExactOrder : order_ - k);
    for (const auto& [d, c] : coeffs_) {
      if (d < k) throw std::invalid_argument("TruncatedSeries: shift below degree 0");
      r.coeffs_.emplace(d - k, c);
    }
    return r;
  }

  TruncatedSeries shifted_up(int k) const {
    TruncatedSeries r(order_ == kExactOrder ? kExactOrder
                                            : std::min<long long>(kExactOrder, order_ + k));
    for (const auto& [d, c] : coeffs_) r.coeffs_.emplace(d + k, c);
    return r;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) {
    return !(a == b);
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0" + order_suffix();
    std::string s;
    for (const auto& [d, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += c.to_string();
      if (d == 1) s += "*t";
      else if (d > 1) s += "*t^" + std::to_string(d);
    }
    return s + order_suffix();
  }

private:
  std::map<int, Rational> coeffs_;
  int order_;

  void drop_zeros() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
      it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
  }
  std::string order_string() const {
    return order_ == kExactOrder ? "exact" : std::to_string(order_);
  }
  std::string order_suffix() const {
    return order_ == kExactOrder ? "" : " + O(t^" + std::to_string(order_) + ")";
  }
};

/// Coefficientwise equality on degrees below n; both operands must actually
/// know that range.
inline bool equal_up_to(const TruncatedSeries& a, const TruncatedSeries& b, int n) {
  if (a.truncation_order() < n || b.truncation_order() < n)
    throw TruncationBudgetExhausted("equal_up_to: order " + std::to_string(n) +
                                    " exceeds operand knowledge");
  for (int d = 0; d < n; ++d)
    if (a.coeff(d) != b.coeff(d)) return false;
  return true;
}

/// First degree below n where a and b differ, or -1 if none.
inline int first_mismatch(const TruncatedSeries& a, const TruncatedSeries& b, int n) {
  for (int d = 0; d < n; ++d)
    if (a.coeff(d) != b.coeff(d)) return d;
  return -1;
}

inline TruncatedSeries derive(const TruncatedSeries& f) {
  int order = f.is_exact() ? kExactOrder : std::max(0, f.truncation_order() - 1);
  TruncatedSeries r(order);
  for (const auto& [d, c] : f.coefficients())
    if (d >= 1) r.set(d - 1, c * Rational(d));
  return r;
}

/// outer(inner(t)), exact Horner substitution; inner must vanish at 0.
inline TruncatedSeries compose(const TruncatedSeries& outer, const TruncatedSeries& inner) {
  if (inner.truncation_order() == 0)
    throw TruncationBudgetExhausted("compose: inner constant term is unknown");
  if (!inner.coeff(0).is_zero())
    throw NonZeroConstantTerm("compose: inner series has nonzero constant term");
  int order = std::min(outer.truncation_order(), inner.truncation_order());
  if (outer.is_zero()) return TruncatedSeries::zero(order);
  // Horner from the top stored degree down to zero.
  TruncatedSeries acc(order);
  int deg = outer.top_degree();
  acc.set(0, outer.coeff(deg));
  while (deg > 0) {
    acc = acc * inner;
    --deg;
    Rational c = deg < outer.truncation_order() ? outer.coeff(deg) : Rational(0);
    if (!c.is_zero()) acc = acc + TruncatedSeries::constant(c, order);
  }
  return acc.truncated(order);
}

/// Compositional inverse: g with f(g(t)) = g(f(t)) = t up to the truncation
/// order. Solved degree by degree; each coefficient of g depends only on
/// coefficients of f of the same degree or lower, so the order is preserved.
inline TruncatedSeries invert_composition(const TruncatedSeries& f) {
  int order = f.truncation_order();
  if (order < 2)
    throw TruncationBudgetExhausted("invert_composition: order too small to see f'(0)");
  if (!f.coeff(0).is_zero()) throw NotInvertible("invert_composition: f(0) != 0");
  Rational a1 = f.coeff(1);
  if (a1.is_zero()) throw NotInvertible("invert_composition: f'(0) = 0");
  if (order == kExactOrder && f.top_degree() > 1)
    throw std::invalid_argument(
        "invert_composition: inverse of a nonlinear polynomial is an infinite "
        "series; truncate the input first");

  if (order == kExactOrder) return TruncatedSeries::monomial(Rational(1) / a1, 1);
  TruncatedSeries g = TruncatedSeries::monomial(Rational(1) / a1, 1);
  TruncatedSeries fpoly = f.as_exact_polynomial();
  for (int d = 2; d < order; ++d) {
    TruncatedSeries probe = compose(fpoly.truncated(d + 1).as_exact_polynomial(),
                                    g.truncated(d + 1).as_exact_polynomial())
                                .truncated(d + 1);
    Rational residual = probe.coeff(d);
    g.set(d, -residual / a1);
  }
  return g.truncated(order);
}

/// Multiplicative inverse of a unit series (nonzero constant term).
/// w_n depends only on u_0..u_n, so the order is preserved; exact inputs
/// need an explicit target order.
inline TruncatedSeries reciprocal(const TruncatedSeries& u, int order = -1) {
  if (order < 0) order = u.truncation_order();
  if (order == kExactOrder)
    throw std::invalid_argument("reciprocal: unbounded order for exact input");
  if (u.truncation_order() < order)
    throw TruncationBudgetExhausted("reciprocal: input order below target");
  if (u.truncation_order() == 0 || u.coeff(0).is_zero())
    throw NotInvertible("reciprocal: zero constant term");
  Rational inv0 = Rational(1) / u.coeff(0);
  TruncatedSeries w(order);
  w.set(0, inv0);
  for (int d = 1; d < order; ++d) {
    Rational s(0);
    for (const auto& [k, c] : u.coefficients()) {
      if (k < 1) continue;
      if (k > d) break;
      s += c * w.coeff(d - k);
    }
    w.set(d, -s * inv0);
  }
  return w;
}

inline TruncatedSeries pow_int(const TruncatedSeries& base, int e) {
  if (e < 0) return pow_int(reciprocal(base), -e);
  TruncatedSeries r = TruncatedSeries::constant(Rational(1), base.truncation_order());
  TruncatedSeries b = base;
  while (e != 0) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

/// (1 + s)^a with rational exponent a, binomial expansion; requires the
/// constant term to be exactly 1 so all coefficients stay rational.
inline TruncatedSeries pow_unipotent(const TruncatedSeries& u, const Rational& a,
                                     int order = -1) {
  if (order < 0) order = u.truncation_order();
  if (order == kExactOrder)
    throw std::invalid_argument("pow_unipotent: unbounded order for exact input");
  if (u.truncation_order() == 0 || u.coeff(0) != Rational(1))
    throw FractionalPowerUndefined("pow_unipotent: constant term is not 1");
  TruncatedSeries s = (u - TruncatedSeries::constant(Rational(1), u.truncation_order()))
                          .truncated(order);
  TruncatedSeries r = TruncatedSeries::constant(Rational(1), order);
  TruncatedSeries p = TruncatedSeries::constant(Rational(1), order);
  int val = std::max(1, s.low_degree());
  for (int j = 1; j * val < order; ++j) {
    p = p * s;
    if (p.is_zero()) break;
    r = r + p.scaled(Rational::binomial(a, j));
    if (p.low_degree() >= order) break;
  }
  return r;
}

/// Laurent series: a finite principal part plus a truncated regular part,
/// with a single exclusive knowledge bound covering both. Products can push
/// the bound below zero; queries past it throw instead of fabricating zeros.
class LaurentSeries {
public:
  LaurentSeries() = default;
  LaurentSeries(TruncatedSeries regular)
      : bound_(regular.truncation_order()), regular_(std::move(regular)) {}

  static LaurentSeries monomial(const Rational& c, int deg, int order = kExactOrder) {
    LaurentSeries f{TruncatedSeries(order)};
    f.set(deg, c);
    return f;
  }

  /// Zero series known strictly below the given bound (which may be <= 0).
  static LaurentSeries truncated_to(int bound) {
    LaurentSeries f;
    f.bound_ = bound;
    f.regular_ = TruncatedSeries(std::max(0, bound));
    return f;
  }

  const std::map<int, Rational>& principal() const { return principal_; }
  const TruncatedSeries& regular() const { return regular_; }

  /// Exclusive upper bound on known degrees (may be negative after heavily
  /// truncated products).
  int known_bound() const { return bound_; }
  int principal_depth() const {
    return principal_.empty() ? 0 : -principal_.begin()->first;
  }
  bool is_zero() const { return principal_.empty() && regular_.is_zero(); }

  void set(int deg, const Rational& c) {
    if (deg >= bound_) return;  // unknown region
    if (deg < 0) {
      if (c.is_zero())
        principal_.erase(deg);
      else
        principal_[deg] = c;
    } else {
      regular_.set(deg, c);
    }
  }

  Rational coeff(int deg) const {
    if (deg >= bound_)
      throw TruncationBudgetExhausted("LaurentSeries: coefficient at degree " +
                                      std::to_string(deg) + " is beyond the budget");
    if (deg < 0) {
      auto it = principal_.find(deg);
      return it == principal_.end() ? Rational(0) : it->second;
    }
    return regular_.coeff(deg);
  }

  /// The coefficient at degree -1; throws if the budget cannot support it.
  Rational residue() const { return coeff(-1); }

  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    LaurentSeries r{a.regular_ + b.regular_};
    r.bound_ = std::min(a.bound_, b.bound_);
    r.principal_ = a.principal_;
    for (const auto& [d, c] : b.principal_) {
      auto [it, fresh] = r.principal_.emplace(d, c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) r.principal_.erase(it);
      }
    }
    r.drop_unknown();
    return r;
  }
  friend LaurentSeries operator-(const LaurentSeries& a) {
    LaurentSeries r{-a.regular_};
    r.bound_ = a.bound_;
    for (const auto& [d, c] : a.principal_) r.principal_.emplace(d, -c);
    return r;
  }
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
    return a + (-b);
  }

  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    long long bound = std::min(a.tail_pollution(b), b.tail_pollution(a));
    int ibound = bound >= kExactOrder ? kExactOrder : static_cast<int>(bound);
    LaurentSeries r{TruncatedSeries(std::max(0, ibound))};
    r.bound_ = ibound;
    auto each = [](const LaurentSeries& f, auto&& fn) {
      for (const auto& [d, c] : f.principal_) fn(d, c);
      for (const auto& [d, c] : f.regular_.coefficients()) fn(d, c);
    };
    each(a, [&](int da, const Rational& ca) {
      each(b, [&](int db, const Rational& cb) {
        int d = da + db;
        if (d >= ibound) return;
        if (d < 0) {
          auto [it, fresh] = r.principal_.emplace(d, ca * cb);
          if (!fresh) {
            it->second += ca * cb;
            if (it->second.is_zero()) r.principal_.erase(it);
          }
        } else {
          r.regular_.set(d, r.regular_.coeff(d) + ca * cb);
        }
      });
    });
    return r;
  }

  LaurentSeries scaled(const Rational& c) const {
    LaurentSeries r{regular_.scaled(c)};
    r.bound_ = bound_;
    if (!c.is_zero())
      for (const auto& [d, v] : principal_) r.principal_.emplace(d, v * c);
    return r;
  }

  LaurentSeries shifted(int k) const {
    LaurentSeries r;
    r.bound_ = bound_ == kExactOrder
                   ? kExactOrder
                   : static_cast<int>(static_cast<long long>(bound_) + k);
    r.regular_ = TruncatedSeries(std::max(0, r.bound_));
    for (const auto& [d, c] : principal_) r.set(d + k, c);
    for (const auto& [d, c] : regular_.coefficients()) r.set(d + k, c);
    return r;
  }

  int low_degree() const {
    if (!principal_.empty()) return principal_.begin()->first;
    return regular_.low_degree();
  }

  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.bound_ == b.bound_ && a.principal_ == b.principal_ &&
           a.regular_ == b.regular_;
  }
  friend bool operator!=(const LaurentSeries& a, const LaurentSeries& b) {
    return !(a == b);
  }

  std::string to_string() const {
    std::string s;
    for (const auto& [d, c] : principal_) {
      if (!s.empty()) s += " + ";
      s += c.to_string() + "*t^(" + std::to_string(d) + ")";
    }
    if (s.empty()) return regular_.to_string();
    return s + " + " + regular_.to_string();
  }

private:
  int bound_ = kExactOrder;
  std::map<int, Rational> principal_;  // negative degrees only
  TruncatedSeries regular_;

  void drop_unknown() {
    if (bound_ >= 0) return;
    for (auto it = principal_.begin(); it != principal_.end();)
      it = it->first >= bound_ ? principal_.erase(it) : std::next(it);
  }

  // Degree from which the other operand's unknown tail pollutes a product
  // with this operand.
  long long tail_pollution(const LaurentSeries& other) const {
    if (other.bound_ == kExactOrder) return kExactOrder;
    long long low = is_zero() ? kExactOrder : low_degree();
    if (low == kExactOrder) return kExactOrder;
    return static_cast<long long>(other.bound_) + low;
  }

  friend LaurentSeries derive(const LaurentSeries& f);
};

inline LaurentSeries derive(const LaurentSeries& f) {
  LaurentSeries r{derive(f.regular())};
  r.bound_ = f.bound_ == kExactOrder ? kExactOrder : f.bound_ - 1;
  for (const auto& [d, c] : f.principal()) r.set(d - 1, c * Rational(d));
  return r;
}

inline Rational residue(const LaurentSeries& f) { return f.residue(); }

inline bool equal_up_to(const LaurentSeries& a, const LaurentSeries& b, int n) {
  if (a.known_bound() < n || b.known_bound() < n)
    throw TruncationBudgetExhausted("equal_up_to(Laurent): insufficient knowledge");
  int lo = std::min(a.is_zero() ? 0 : a.low_degree(), b.is_zero() ? 0 : b.low_degree());
  for (int d = lo; d < n; ++d)
    if (a.coeff(d) != b.coeff(d)) return false;
  return true;
}

/// rho^k as a Laurent series for any integer k; rho must vanish at 0 with
/// invertible linear coefficient.
inline LaurentSeries laurent_power(const TruncatedSeries& rho, int k) {
  if (rho.truncation_order() < 2 || !rho.coeff(0).is_zero() || rho.coeff(1).is_zero())
    throw NotInvertible("laurent_power: not a coordinate change");
  if (k >= 0) {
    return LaurentSeries{pow_int(rho, k)};
  }
  TruncatedSeries unit = rho.shifted_down(1);       // rho / t
  TruncatedSeries inv = reciprocal(unit);           // order preserved
  TruncatedSeries p = pow_int(inv, -k);             // unit^k for k<0
  LaurentSeries r = LaurentSeries::truncated_to(
      p.truncation_order() == kExactOrder ? kExactOrder : p.truncation_order() + k);
  for (const auto& [d, c] : p.coefficients()) r.set(d + k, c);
  return r;
}

/// f(rho(t)) for Laurent f; principal powers expand through the unit part
/// of rho, the regular part composes directly.
inline LaurentSeries laurent_compose(const LaurentSeries& f, const TruncatedSeries& rho,
                                     int depth_cap = kDefaultLaurentDepth) {
  if (f.principal_depth() > depth_cap)
    throw TruncationBudgetExhausted("laurent_compose: principal depth exceeds cap");
  LaurentSeries acc{compose(f.regular(), rho)};
  for (const auto& [d, c] : f.principal())
    acc = acc + laurent_power(rho, d).scaled(c);
  return acc;
}

}  // namespace formaldisc
