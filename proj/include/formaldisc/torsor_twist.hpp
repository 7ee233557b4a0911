#pragma once

#include <string>
#include <utility>
#include <vector>

#include "formaldisc/config_rational.hpp"
#include "formaldisc/density_module.hpp"
#include "formaldisc/differentials.hpp"
#include "formaldisc/prng.hpp"
#include "formaldisc/report.hpp"

namespace formaldisc {

/// Torsor of formal coordinates at a point: elements are coordinate changes
/// relative to the standard coordinate, with the simply transitive right
/// action xi . h = h o xi.
struct CoordinateTorsor {
  /// The unique h with h o xi = xi~, namely xi~ composed after xi^{-1}.
  static CoordinateChange translate(const CoordinateChange& xi,
                                    const CoordinateChange& xi_tilde) {
    return group_compose(group_inverse(xi), xi_tilde);
  }
};

inline CoordinateChange torsor_translate(const CoordinateChange& xi,
                                         const CoordinateChange& xi_tilde) {
  return CoordinateTorsor::translate(xi, xi_tilde);
}

/// A module element together with the coordinate it is written in; the
/// equivalence (g, a . xi) ~ (R(a) g, xi) makes normalization to the base
/// coordinate well defined.
struct TwistElement {
  DensityElement element;
  CoordinateChange coordinate;
};

/// Rewrites the representative to the base (standard) coordinate; idempotent.
inline TwistElement twist_normalize(const TwistElement& e) {
  int order = e.coordinate.truncation_order();
  return {act_pullback(e.coordinate, e.element), CoordinateChange::identity(order)};
}

/// Independent per-point coordinate changes around pairwise-distinct centers.
struct PointAtlas {
  std::vector<CoordinateChange> changes;
  std::vector<GaussianRational> centers;

  int n_points() const { return static_cast<int>(changes.size()); }

  void validate() const {
    if (!centers.empty() && centers.size() != changes.size())
      throw ValidationError("PointAtlas: one center per point required");
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        if (centers[i] == centers[j])
          throw ValidationError("PointAtlas: centers must be pairwise distinct");
  }

  static PointAtlas identity(int n, int order) {
    PointAtlas a;
    for (int i = 0; i < n; ++i) a.changes.push_back(CoordinateChange::identity(order));
    return a;
  }
};

/// A section vector after a coordinate change: the substituted and
/// Jacobian-weighted expansion (known per variable up to var_bounds) together
/// with the transported module labels.
struct TransformedSection {
  int n = 0;
  RatPoly expansion;            // in z_1..z_n
  std::vector<int> var_bounds;  // exclusive per-variable knowledge bounds
  std::vector<DensityElement> transported_labels;
  std::vector<std::vector<int>> orderings;
};

namespace detail {
/// (rho'(z))^lambda, truncated to the working order when one is supplied.
inline TruncatedSeries jacobian_power(const CoordinateChange& rho, const Rational& lambda,
                                      int order = -1) {
  TruncatedSeries rp = derive(rho.series());
  if (order > 0 && rp.truncation_order() > order) rp = rp.truncated(order);
  if (lambda.is_integer()) {
    long long k = lambda.num().to_int();
    if (k == 0) return TruncatedSeries::constant(Rational(1), rp.truncation_order());
    return pow_int(rp, static_cast<int>(k));
  }
  if (!rho.is_unipotent())
    throw FractionalPowerUndefined(
        "transform_section: fractional weight needs unipotent changes");
  return pow_unipotent(rp, lambda);
}
}  // namespace detail

/// Applies an atlas to a pole-free section vector: substitutes
/// z_j -> rho_j(z_j) truncated at the working order, multiplies each
/// differential slot by its Jacobian factor (rho_j')^lambda, and transports
/// each module label by the inverse pullback. Per-point changes are
/// independent, so the Jacobian matrix is diagonal.
inline TransformedSection transform_section(const SectionVector& S, const PointAtlas& atlas,
                                            const ModuleSpec& module, int working_order,
                                            int degree_cap = 64) {
  const int n = S.n_points();
  atlas.validate();
  if (atlas.n_points() != n)
    throw ValidationError("transform_section: atlas size mismatch");
  if (!S.base.is_polynomial())
    throw ValidationError(
        "transform_section: pole divisors are not covariant under independent "
        "per-point changes; only pole-free sections transform");
  const Rational& lambda = S.base.labels().lambda;
  if (S.base.numerator().total_degree() + working_order > degree_cap)
    throw ExpansionBudgetExceeded("transform_section: expansion exceeds degree cap");

  // per-slot substitution powers and Jacobian factors
  std::vector<TruncatedSeries> jac;
  std::vector<std::vector<TruncatedSeries>> powers(n);
  std::vector<int> bounds(n, kExactOrder);
  for (int j = 0; j < n; ++j) {
    jac.push_back(detail::jacobian_power(atlas.changes[j], lambda, working_order));
    bounds[j] = std::min(jac[j].truncation_order(), working_order);
  }
  auto slot_power = [&](int j, int e) -> const TruncatedSeries& {
    auto& cache = powers[j];
    if (cache.empty())
      cache.push_back(TruncatedSeries::constant(Rational(1), working_order));
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back((cache.back() * atlas.changes[j].series()).truncated(working_order));
    return cache[e];
  };

  RatPoly out(n);
  for (const auto& [e, c] : S.base.numerator().terms()) {
    // tensor product of the per-slot univariate series rho_j^{e_j} * jac_j
    std::vector<TruncatedSeries> factors;
    factors.reserve(n);
    for (int j = 0; j < n; ++j) {
      TruncatedSeries f = (slot_power(j, e[j]) * jac[j]).truncated(working_order);
      bounds[j] = std::min(bounds[j], f.truncation_order());
      factors.push_back(std::move(f));
    }
    std::vector<std::pair<RatPoly::Exponents, Rational>> acc{
        {RatPoly::Exponents(n, 0), c}};
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<RatPoly::Exponents, Rational>> next;
      for (const auto& [exp, coef] : acc)
        for (const auto& [d, cd] : factors[j].coefficients()) {
          RatPoly::Exponents e2 = exp;
          e2[j] = d;
          next.emplace_back(std::move(e2), coef * cd);
        }
      acc = std::move(next);
    }
    for (auto& [exp, coef] : acc) out.add_term(exp, coef);
  }

  TransformedSection t;
  t.n = n;
  t.expansion = std::move(out);
  t.var_bounds = std::move(bounds);
  t.orderings = S.orderings;
  const auto& m = S.base.labels().m;
  for (int j = 0; j < n; ++j) {
    DensityElement g = m.empty() ? DensityElement::basis(module, 0)
                                 : DensityElement::basis(module, m[j]);
    t.transported_labels.push_back(
        act_pullback(group_inverse(atlas.changes[j]), g));
  }
  return t;
}

/// Coordinate-independence of section vectors, verified on the evaluation
/// family: each slot's transported density, re-evaluated through the
/// substituted coordinate with its Jacobian factor, must reproduce the
/// original slot factor z^m exactly up to the working order.
/// mutate_jacobian shifts the Jacobian weight by one (the documented
/// negative control, which must fail at leading order).
inline CheckReport check_section_invariance(const ModuleSpec& module,
                                            const std::vector<int>& slot_indices,
                                            const PointAtlas& atlas, int working_order,
                                            bool mutate_jacobian = false) {
  CheckReport report;
  report.name = "section_invariance";
  const int n = static_cast<int>(slot_indices.size());
  atlas.validate();
  if (atlas.n_points() != n)
    throw ValidationError("check_section_invariance: atlas size mismatch");
  const Rational lambda = module.lambda;

  // entry-independent per-slot comparison; every cyclic entry carries the
  // same slot data, so a mismatch in any entry is a mismatch in some slot
  std::vector<bool> slot_ok(n, true);
  std::vector<std::string> slot_msg(n);
  for (int j = 0; j < n; ++j) {
    const CoordinateChange& rho = atlas.changes[j];
    DensityElement g = DensityElement::basis(module, slot_indices[j]);
    DensityElement h = act_pullback(group_inverse(rho), g);
    if (h.truncated_above()) {
      slot_ok[j] = false;
      slot_msg[j] = "slot " + std::to_string(j + 1) + ": transport overflowed the cutoff";
      continue;
    }
    Rational weight = mutate_jacobian ? lambda + Rational(1) : lambda;
    TruncatedSeries factor =
        (compose(h.as_series(), rho.series()) *
         detail::jacobian_power(rho, weight, working_order))
            .truncated(working_order);
    TruncatedSeries expected =
        TruncatedSeries::monomial(Rational(1), slot_indices[j], working_order);
    int window = std::min(working_order, factor.truncation_order());
    int d = first_mismatch(factor, expected, window);
    if (d >= 0) {
      slot_ok[j] = false;
      slot_msg[j] = "slot " + std::to_string(j + 1) + ": coefficient at degree " +
                    std::to_string(d) + " is " + factor.coeff(d).to_string() +
                    ", expected " + expected.coeff(d).to_string();
    }
  }
  SectionVector S = build_section_vector(RationalSection::polynomial(RatPoly(n)));
  for (const auto& ordering : S.orderings) {
    ++report.trials;
    for (int slot : ordering)
      if (!slot_ok[slot]) {
        report.fail("entry starting at " + std::to_string(ordering[0] + 1) + ", " +
                    slot_msg[slot]);
        return report;
      }
  }
  return report;
}

/// Randomized exact verification of R(rho * mu) = R(rho) composed after
/// R(mu) on the density module (Lemma-level homomorphism law). Witnesses are
/// kept flag-free by using low basis indices.
inline CheckReport check_representation_law(const ModuleSpec& module, int trials,
                                            std::uint64_t seed, int order = 8) {
  CheckReport report;
  report.name = "representation_law";
  for (int t = 0; t < trials; ++t) {
    Prng prng = Prng::for_trial(seed, "representation_law", t);
    CoordinateChange rho =
        t % 3 == 0 ? CoordinateChange::scaling(prng.small_nonzero_rational(), order)
                   : prng.coordinate_change(order);
    CoordinateChange mu = t % 3 == 1
                              ? CoordinateChange::scaling(prng.small_nonzero_rational(), order)
                              : prng.coordinate_change(order);
    int idx = static_cast<int>(prng.range(0, 2));
    DensityElement e = DensityElement::basis(module, idx);
    DensityElement lhs = act_pullback(group_compose(rho, mu), e);
    DensityElement rhs = act_pullback(rho, act_pullback(mu, e));
    ++report.trials;
    int mi = -1;
    if (!density_equal(lhs, rhs, &mi)) {
      report.fail("trial " + std::to_string(t) + ": components differ at index " +
                  std::to_string(mi));
      return report;
    }
  }
  return report;
}

/// Convention sensitivity: the mirrored composition order must fail on some
/// witness pair (scalings alone commute, so the witness mixes a scaling with
/// a unipotent change).
inline bool representation_convention_witness(const ModuleSpec& module, int order = 8) {
  CoordinateChange rho = CoordinateChange::scaling(Rational(2), order);
  TruncatedSeries s(order);
  s.set(1, Rational(1));
  s.set(2, Rational(1));
  CoordinateChange mu(s);
  DensityElement e = DensityElement::basis(module, std::min(1, module.grade_cutoff));
  DensityElement lhs = act_pullback(group_compose(rho, mu), e);
  DensityElement wrong = act_pullback(mu, act_pullback(rho, e));
  return !density_equal(lhs, wrong);
}

/// Filtration stage bookkeeping: dimension additivity of G_{<=m}, stability
/// of the stages under unipotent pullback (classes below the stage are
/// unaffected by what lives above it), and the induced identity on each
/// graded quotient.
inline CheckReport exact_sequence_check(const ModuleSpec& spec, int m,
                                        const CoordinateChange* unipotent = nullptr) {
  CheckReport report;
  report.name = "exact_sequence";
  if (Rational(m) < spec.lambda || m > spec.grade_cutoff + 0)
    throw BadRange("exact_sequence_check: m outside [lambda, cutoff]");
  auto dim_up_to = [&](Rational bound) {
    int d = 0;
    for (int n = 0; n <= spec.grade_cutoff; ++n)
      if (spec.grade_of(n) <= bound) ++d;
    return d;
  };
  int dm = dim_up_to(Rational(m));
  int dm1 = dim_up_to(Rational(m - 1));
  int graded = 0;
  for (int n = 0; n <= spec.grade_cutoff; ++n)
    if (spec.grade_of(n) > Rational(m - 1) && spec.grade_of(n) <= Rational(m)) ++graded;
  ++report.trials;
  if (dm != dm1 + graded) {
    report.fail("dimension additivity fails at m = " + std::to_string(m));
    return report;
  }

  CoordinateChange rho = unipotent ? *unipotent : [] {
    TruncatedSeries s(10);
    s.set(1, Rational(1));
    s.set(2, Rational(1));
    return CoordinateChange(s);
  }();
  if (!rho.is_unipotent())
    throw ValidationError("exact_sequence_check: coordinate change must be unipotent");
  for (int n = 0; n <= spec.grade_cutoff; ++n) {
    DensityElement e = DensityElement::basis(spec, n);
    DensityElement image = act_pullback(rho, e);
    ++report.trials;
    if (spec.grade_of(n) > Rational(m)) {
      // above the stage: the class of the image in G_{<=m} must vanish
      if (!filtration_truncate(image, m).is_zero()) {
        report.fail("stage m = " + std::to_string(m) +
                    " not preserved by unipotent pullback at index " + std::to_string(n));
        return report;
      }
    } else if (n < image.known_bound()) {
      // induced map on the graded quotient is the identity
      if (image.component(n) != Rational(1) ||
          (!image.is_zero() && image.min_index() < n)) {
        report.fail("graded quotient map is not the identity at index " +
                    std::to_string(n));
        return report;
      }
    }
  }
  return report;
}

/// Per-slot residue pairing of weight-1 differentials against slot densities,
/// the dual-bundle pairing restricted to a collection of discs.
inline std::vector<Rational> pair_dual_section(const std::vector<KDifferential>& eta,
                                               const std::vector<LaurentSeries>& slots) {
  return residue_pairing(eta, slots);
}

}  // namespace formaldisc
