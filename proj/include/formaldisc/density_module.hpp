#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "formaldisc/coord_change.hpp"
#include "formaldisc/report.hpp"
#include "formaldisc/series.hpp"

namespace formaldisc {

/// Reference module of tensor densities of weight lambda: basis vectors
/// t^n (dt)^lambda for 0 <= n <= grade_cutoff, grade of index n being
/// n + lambda. The infinite module is represented by its finite filtration
/// stage; anything pushed past the cutoff is dropped and flagged.
struct ModuleSpec {
  Rational lambda;
  int grade_cutoff = 0;

  ModuleSpec() = default;
  ModuleSpec(Rational l, int cutoff) : lambda(std::move(l)), grade_cutoff(cutoff) {
    if (cutoff < 0) throw ValidationError("ModuleSpec: negative grade_cutoff");
  }

  Rational grade_of(int n) const { return Rational(n) + lambda; }

  friend bool operator==(const ModuleSpec& a, const ModuleSpec& b) {
    return a.lambda == b.lambda && a.grade_cutoff == b.grade_cutoff;
  }
};

class DensityElement {
public:
  DensityElement() = default;
  explicit DensityElement(ModuleSpec spec)
      : spec_(std::move(spec)), known_bound_(spec_.grade_cutoff + 1) {}

  static DensityElement basis(const ModuleSpec& spec, int n) {
    if (n < 0 || n > spec.grade_cutoff)
      throw ValidationError("DensityElement: basis index outside module");
    DensityElement e(spec);
    e.comps_[n] = Rational(1);
    return e;
  }

  const ModuleSpec& spec() const { return spec_; }
  const std::map<int, Rational>& components() const { return comps_; }

  /// Exclusive bound on basis indices whose coefficients are known exactly.
  int known_bound() const { return known_bound_; }
  /// True when a possibly nonzero component above the cutoff was dropped.
  bool truncated_above() const { return truncated_above_; }
  /// Fully known, nothing dropped: every exactness claim applies.
  bool flag_free() const {
    return !truncated_above_ && known_bound_ > spec_.grade_cutoff;
  }

  bool is_zero() const { return comps_.empty(); }

  Rational component(int n) const {
    if (n >= known_bound_)
      throw TruncationBudgetExhausted("DensityElement: component beyond known bound");
    auto it = comps_.find(n);
    return it == comps_.end() ? Rational(0) : it->second;
  }

  void set_component(int n, const Rational& c) {
    if (n < 0 || n > spec_.grade_cutoff)
      throw ValidationError("DensityElement: index outside module");
    if (c.is_zero())
      comps_.erase(n);
    else
      comps_[n] = c;
  }

  DensityElement map_components(const std::function<Rational(int, const Rational&)>& f) const {
    DensityElement r(spec_);
    r.known_bound_ = known_bound_;
    r.truncated_above_ = truncated_above_;
    for (const auto& [n, c] : comps_) {
      Rational v = f(n, c);
      if (!v.is_zero()) r.comps_[n] = v;
    }
    return r;
  }

  friend DensityElement operator+(const DensityElement& a, const DensityElement& b) {
    if (!(a.spec_ == b.spec_))
      throw ValidationError("DensityElement: mixed module specs");
    DensityElement r(a.spec_);
    r.known_bound_ = std::min(a.known_bound_, b.known_bound_);
    r.truncated_above_ = a.truncated_above_ || b.truncated_above_;
    r.comps_ = a.comps_;
    for (const auto& [n, c] : b.comps_) {
      auto [it, fresh] = r.comps_.emplace(n, c);
      if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) r.comps_.erase(it);
      }
    }
    return r;
  }
  friend DensityElement operator-(const DensityElement& a) {
    return a.map_components([](int, const Rational& c) { return -c; });
  }
  friend DensityElement operator-(const DensityElement& a, const DensityElement& b) {
    return a + (-b);
  }
  DensityElement scaled(const Rational& s) const {
    return map_components([&](int, const Rational& c) { return c * s; });
  }

  /// Coefficient series of the density. A flag-free element is exactly its
  /// stored polynomial; otherwise the knowledge bound becomes the truncation
  /// order.
  TruncatedSeries as_series() const {
    TruncatedSeries f(flag_free() ? kExactOrder : known_bound_);
    for (const auto& [n, c] : comps_) f.set(n, c);
    return f;
  }

  /// Repackages a series as components, dropping and flagging anything past
  /// the cutoff.
  static DensityElement from_series(const ModuleSpec& spec, const TruncatedSeries& f) {
    DensityElement e(spec);
    e.known_bound_ = std::min(f.truncation_order() == kExactOrder
                                  ? spec.grade_cutoff + 1
                                  : f.truncation_order(),
                              spec.grade_cutoff + 1);
    for (const auto& [n, c] : f.coefficients()) {
      if (n > spec.grade_cutoff)
        e.truncated_above_ = true;
      else
        e.comps_[n] = c;
    }
    return e;
  }

  int max_index() const { return comps_.empty() ? -1 : comps_.rbegin()->first; }
  int min_index() const { return comps_.empty() ? -1 : comps_.begin()->first; }

  std::string to_string() const {
    if (comps_.empty()) return "0";
    std::string s;
    for (const auto& [n, c] : comps_) {
      if (!s.empty()) s += " + ";
      s += c.to_string() + "*t^" + std::to_string(n);
    }
    s += " (dt)^" + spec_.lambda.to_string();
    return s;
  }

private:
  ModuleSpec spec_;
  std::map<int, Rational> comps_;
  int known_bound_ = 1;
  bool truncated_above_ = false;
};

/// Componentwise equality within the shared knowledge window.
inline bool density_equal(const DensityElement& a, const DensityElement& b,
                          int* mismatch_index = nullptr) {
  int bound = std::min(a.known_bound(), b.known_bound());
  for (int n = 0; n < bound; ++n) {
    if (a.component(n) != b.component(n)) {
      if (mismatch_index) *mismatch_index = n;
      return false;
    }
  }
  return true;
}

/// K_G with eigenvalue n + lambda on the basis vector t^n (dt)^lambda.
inline DensityElement grading_operator(const DensityElement& e) {
  return e.map_components(
      [&](int n, const Rational& c) { return c * e.spec().grade_of(n); });
}

/// -d/dt on the density coefficient: t^n -> -n t^(n-1); index 0 dies.
inline DensityElement translation_operator(const DensityElement& e) {
  return DensityElement::from_series(e.spec(), -derive(e.as_series()));
}

/// Lie derivative of a weight-lambda density along v d/dt:
/// f (dt)^lambda -> (v f' + lambda v' f) (dt)^lambda.
inline DensityElement derivation_action(const Derivation& v, const DensityElement& e) {
  const TruncatedSeries f = e.as_series();
  const TruncatedSeries& vc = v.coefficient_series();
  TruncatedSeries out = vc * derive(f) + derive(vc) * f.scaled(e.spec().lambda);
  return DensityElement::from_series(e.spec(), out);
}

/// R(rho): t^n (dt)^lambda -> rho(t)^n (rho'(t))^lambda (dt)^lambda,
/// re-expanded in the basis. For non-integer lambda rho must be unipotent.
inline DensityElement act_pullback(const CoordinateChange& rho, const DensityElement& e) {
  const Rational& lambda = e.spec().lambda;
  const TruncatedSeries rp = derive(rho.series());
  TruncatedSeries jac;
  if (lambda.is_integer()) {
    long long k = lambda.num().to_int();
    jac = k == 0 ? TruncatedSeries::constant(Rational(1), rp.truncation_order())
                 : pow_int(rp, static_cast<int>(k));
  } else {
    if (!rho.is_unipotent())
      throw FractionalPowerUndefined(
          "act_pullback: fractional weight needs a unipotent coordinate change");
    jac = pow_unipotent(rp, lambda,
                        std::min(rp.truncation_order(), e.spec().grade_cutoff + 1));
  }
  // sum_n c_n rho^n = f(rho(t)), then times the Jacobian power
  TruncatedSeries out = compose(e.as_series(), rho.series()) * jac;
  return DensityElement::from_series(e.spec(), out);
}

/// Projection killing every component of grade > m.
inline DensityElement filtration_truncate(const DensityElement& e, int m) {
  return e.map_components([&](int n, const Rational& c) {
    return e.spec().grade_of(n) > Rational(m) ? Rational(0) : c;
  });
}

/// Pluggable module operations; the default instance wires the tensor
/// density realization above. check_admissible certifies any realization
/// against the admissibility axioms.
struct DensityModuleOps {
  std::function<DensityElement(const DensityElement&)> grading = [](const DensityElement& e) {
    return grading_operator(e);
  };
  std::function<DensityElement(const DensityElement&)> translation =
      [](const DensityElement& e) { return translation_operator(e); };
  std::function<DensityElement(const Derivation&, const DensityElement&)> derivation =
      [](const Derivation& v, const DensityElement& e) { return derivation_action(v, e); };
  std::function<DensityElement(const CoordinateChange&, const DensityElement&)> pullback =
      [](const CoordinateChange& rho, const DensityElement& e) {
        return act_pullback(rho, e);
      };
};

/// Certifies the admissibility axioms on the truncated module:
/// grading bounded below with one-dimensional pieces, nilpotent translation,
/// grade-raising locally nilpotent positive fields, and exp/pullback
/// compatibility. Failures are reported, not thrown.
inline CheckReport check_admissible(const ModuleSpec& spec,
                                    const DensityModuleOps& ops = {},
                                    int exp_order = 8) {
  CheckReport report;
  report.name = "admissibility";
  const int cutoff = spec.grade_cutoff;

  for (int n = 0; n <= cutoff; ++n) {
    DensityElement e = DensityElement::basis(spec, n);
    ++report.trials;

    // grading axiom: K_G diagonal with eigenvalue n + lambda, bounded below
    DensityElement g = ops.grading(e);
    bool diagonal = true;
    for (const auto& [k, c] : g.components())
      if (k != n) diagonal = false;
    Rational eigen = g.components().count(n) ? g.component(n) : Rational(0);
    if (!diagonal || eigen != spec.grade_of(n)) {
      report.fail("grading axiom violated on basis index " + std::to_string(n) +
                  ": expected eigenvalue " + spec.grade_of(n).to_string());
      continue;
    }
    if (spec.grade_of(n) < spec.lambda)
      report.fail("grading not bounded below at index " + std::to_string(n));

    // grading agrees (up to the recorded sign convention) with -t d/dt
    DensityElement lie = ops.derivation(
        Derivation(TruncatedSeries::monomial(Rational(-1), 1)), e);
    if (!density_equal(lie, ops.grading(e).scaled(Rational(-1))))
      report.fail("derivation_action(-t d/dt) does not match -K_G at index " +
                  std::to_string(n));

    // translation lowers the index and is nilpotent
    DensityElement cur = e;
    for (int steps = 0; steps <= n; ++steps) cur = ops.translation(cur);
    if (!cur.is_zero())
      report.fail("translation not nilpotent on basis index " + std::to_string(n));

    // positive fields raise the grade strictly, hence act locally nilpotently
    for (int k = 2; k <= 3; ++k) {
      Derivation v = witt_field(k - 1);  // -t^k d/dt
      DensityElement w = ops.derivation(v, e);
      if (!w.is_zero() && w.min_index() <= n) {
        report.fail("positive field -t^" + std::to_string(k) +
                    " d/dt failed to raise grade at index " + std::to_string(n));
        break;
      }
      DensityElement it = e;
      int guard = 0;
      while (!it.is_zero() && !it.truncated_above() && guard <= cutoff + 2) {
        it = ops.derivation(v, it);
        ++guard;
      }
      if (!it.is_zero() && !it.truncated_above()) {
        report.fail("positive field not locally nilpotent within cutoff at index " +
                    std::to_string(n));
        break;
      }
    }
  }

  // exponentiation axiom: exp of a positive field matches the pullback of the
  // exponentiated coordinate change, as a finite sum by nilpotence
  Derivation v(TruncatedSeries::monomial(Rational(-1), 2, exp_order));
  CoordinateChange flow = exp_derivation(v);
  for (int n = 0; n <= std::min(cutoff, 3); ++n) {
    DensityElement e = DensityElement::basis(spec, n);
    DensityElement lhs = ops.pullback(flow, e);
    DensityElement rhs = e;
    DensityElement term = e;
    Rational kfact(1);
    for (int k = 1; k <= cutoff + 2 && !term.is_zero(); ++k) {
      term = ops.derivation(v, term);
      kfact *= Rational(k);
      rhs = rhs + term.scaled(Rational(1) / kfact);
    }
    if (!density_equal(lhs, rhs)) {
      report.fail("exp of positive field disagrees with pullback of its flow at "
                  "basis index " + std::to_string(n));
      break;
    }
  }
  return report;
}

}  // namespace formaldisc
