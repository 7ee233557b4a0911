#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "formaldisc/errors.hpp"
#include "formaldisc/rational.hpp"

namespace formaldisc {

/// Sparse multivariate polynomial with exact coefficients; exponent vectors
/// are kept in lexicographic order so iteration is deterministic.
template <typename C>
class MultiPoly {
public:
  using Exponents = std::vector<int>;

  MultiPoly() = default;
  explicit MultiPoly(int nvars) : nvars_(nvars) {}

  static MultiPoly constant(int nvars, const C& c) {
    MultiPoly p(nvars);
    p.set(Exponents(nvars, 0), c);
    return p;
  }
  static MultiPoly variable(int nvars, int i) {
    MultiPoly p(nvars);
    Exponents e(nvars, 0);
    e[i] = 1;
    p.set(e, C(Rational(1)));
    return p;
  }
  static MultiPoly monomial(int nvars, Exponents e, const C& c) {
    MultiPoly p(nvars);
    p.set(std::move(e), c);
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Exponents, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void set(Exponents e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_)
      throw ValidationError("MultiPoly: exponent arity mismatch");
    for (int x : e)
      if (x < 0) throw ValidationError("MultiPoly: negative exponent");
    if (c.is_zero())
      terms_.erase(e);
    else
      terms_[std::move(e)] = c;
  }

  void add_term(const Exponents& e, const C& c) {
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  C coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C(Rational(0)) : it->second;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  int degree_in(int i) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r = a;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-b); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (int i = 0; i < r.nvars_; ++i) e[i] += eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  MultiPoly scaled(const C& c) const {
    MultiPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
  }

  MultiPoly pow(int k) const {
    MultiPoly r = constant(nvars_, C(Rational(1)));
    MultiPoly b = *this;
    while (k > 0) {
      if (k & 1) r = r * b;
      b = b * b;
      k >>= 1;
    }
    return r;
  }

  C eval(const std::vector<C>& point) const {
    if (static_cast<int>(point.size()) != nvars_)
      throw ValidationError("MultiPoly: evaluation arity mismatch");
    C total(Rational(0));
    for (const auto& [e, c] : terms_) {
      C v = c;
      for (int i = 0; i < nvars_; ++i)
        if (e[i] != 0) v = v * point[i].pow(e[i]);
      total = total + v;
    }
    return total;
  }

  MultiPoly partial_derivative(int i) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponents d = e;
      d[i] -= 1;
      r.add_term(d, c * C(Rational(e[i])));
    }
    return r;
  }

  /// Substitutes each variable by the given polynomial (all over the target
  /// arity). Powers are cached per variable.
  MultiPoly substitute_all(const std::vector<MultiPoly>& repl) const {
    if (static_cast<int>(repl.size()) != nvars_)
      throw ValidationError("MultiPoly: substitution arity mismatch");
    int target = repl.empty() ? 0 : repl[0].nvars_;
    MultiPoly r(target);
    std::vector<std::vector<MultiPoly>> powers(nvars_);
    auto power = [&](int i, int k) -> const MultiPoly& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(constant(target, C(Rational(1))));
      while (static_cast<int>(cache.size()) <= k)
        cache.push_back(cache.back() * repl[i]);
      return cache[k];
    };
    for (const auto& [e, c] : terms_) {
      MultiPoly term = constant(target, c);
      for (int i = 0; i < nvars_; ++i)
        if (e[i] != 0) term = term * power(i, e[i]);
      r = r + term;
    }
    return r;
  }

  /// Relabels variables: the exponent of variable i moves to sigma[i].
  MultiPoly relabel(const std::vector<int>& sigma) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponents p(nvars_, 0);
      for (int i = 0; i < nvars_; ++i) p[sigma[i]] = e[i];
      r.add_term(p, c);
    }
    return r;
  }

  /// Appends extra always-zero-exponent variables.
  MultiPoly extended(int extra) const {
    MultiPoly r(nvars_ + extra);
    for (const auto& [e, c] : terms_) {
      Exponents p = e;
      p.resize(nvars_ + extra, 0);
      r.terms_.emplace(std::move(p), c);
    }
    return r;
  }

  MultiPoly truncate_total(int K) const {
    MultiPoly r(nvars_);
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int x : e) s += x;
      if (s <= K) r.terms_.emplace(e, c);
    }
    return r;
  }

  /// Collects terms by the power of variable i; the returned polynomials
  /// keep the same arity with exponent 0 at i.
  std::map<int, MultiPoly> collect_by_power(int i) const {
    std::map<int, MultiPoly> out;
    for (const auto& [e, c] : terms_) {
      Exponents rest = e;
      int k = rest[i];
      rest[i] = 0;
      auto [it, fresh] = out.emplace(k, MultiPoly(nvars_));
      it->second.add_term(rest, c);
    }
    return out;
  }

  template <typename C2>
  MultiPoly<C2> convert(const std::function<C2(const C&)>& f) const {
    MultiPoly<C2> r(nvars_);
    for (const auto& [e, c] : terms_) r.set(e, f(c));
    return r;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [e, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.to_string() + ")";
      for (int i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        s += "*z" + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
      }
    }
    return s;
  }

private:
  int nvars_ = 0;
  std::map<Exponents, C> terms_;

  template <typename>
  friend class MultiPoly;
};

using RatPoly = MultiPoly<Rational>;
using GaussPoly = MultiPoly<GaussianRational>;

inline GaussPoly to_gauss(const RatPoly& p) {
  return p.convert<GaussianRational>(
      [](const Rational& c) { return GaussianRational(c); });
}

}  // namespace formaldisc
