#pragma once

#include <string>
#include <string_view>

#include "formaldisc/bigint.hpp"
#include "formaldisc/errors.hpp"

namespace formaldisc {

/// Exact rational number. Always normalized: gcd(num, den) = 1, den > 0,
/// zero is 0/1.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
  Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

  /// Parses "p/q" or "p".
  static Rational from_string(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos)
      return Rational(BigInt::from_string(s), BigInt::from_int(1));
    return Rational(BigInt::from_string(s.substr(0, slash)),
                    BigInt::from_string(s.substr(slash + 1)));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_negative() const { return num_.is_negative(); }
  bool is_integer() const { return den_ == BigInt::from_int(1); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return is_negative() ? -*this : *this; }

  Rational pow(long long e) const {
    if (e >= 0)
      return Rational(BigInt::pow(num_, static_cast<unsigned long long>(e)),
                      BigInt::pow(den_, static_cast<unsigned long long>(e)));
    if (is_zero()) throw std::domain_error("Rational: 0 to negative power");
    return Rational(BigInt::pow(den_, static_cast<unsigned long long>(-e)),
                    BigInt::pow(num_, static_cast<unsigned long long>(-e)));
  }

  static Rational factorial(int n) {
    Rational r(1);
    for (int k = 2; k <= n; ++k) r *= Rational(k);
    return r;
  }

  /// Generalized binomial a(a-1)...(a-j+1)/j!, exact for rational a.
  static Rational binomial(const Rational& a, int j) {
    Rational r(1);
    for (int k = 0; k < j; ++k) r *= (a - Rational(k)) / Rational(k + 1);
    return r;
  }

  /// Plain form: "3", "-1/2".
  std::string to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
  }

  /// Fixed "p/q" rendering used by all JSON output.
  std::string canonical_string() const {
    return num_.to_string() + "/" + den_.to_string();
  }

private:
  BigInt num_, den_;

  void normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (num_.is_zero()) {
      den_ = BigInt::from_int(1);
      return;
    }
    if (den_.is_negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_.abs(), den_);
    num_ = num_ / g;
    den_ = den_ / g;
  }
};

/// Complex number with exact rational real and imaginary parts.
struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r) : re(std::move(r)) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(long long r) : re(r) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  /// |z|^2, exact.
  Rational norm() const { return re * re + im * im; }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    Rational n = b.norm();
    if (n.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }

  GaussianRational pow(long long e) const {
    if (e < 0) return GaussianRational(Rational(1)) / pow(-e);
    GaussianRational r{Rational(1)};
    GaussianRational base = *this;
    while (e != 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  std::string to_string() const {
    if (im.is_zero()) return re.to_string();
    return re.to_string() + (im.is_negative() ? "-" : "+") + im.abs().to_string() + "i";
  }
};

/// Strict test for |u| + |v| < |w| using only the exact squared moduli
/// A = |u|^2, B = |v|^2, C = |w|^2; no square roots are taken.
inline bool sum_of_moduli_less(const Rational& A, const Rational& B, const Rational& C) {
  // |u|+|v| < |w|  <=>  C - A - B > 0  and  4AB < (C - A - B)^2
  Rational d = C - A - B;
  if (!(d > Rational(0))) return false;
  return Rational(4) * A * B < d * d;
}

}  // namespace formaldisc
