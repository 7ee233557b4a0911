#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formaldisc/density_module.hpp"
#include "formaldisc/prng.hpp"

using namespace formaldisc;

TEST_CASE("grading operator multiplies by n + lambda") {
  ModuleSpec spec(Rational(1), 10);
  DensityElement e = DensityElement::basis(spec, 2);
  CHECK(grading_operator(e).component(2) == Rational(3));

  ModuleSpec flat(Rational(0), 10);
  CHECK(grading_operator(DensityElement::basis(flat, 0)).is_zero());

  ModuleSpec half(Rational(1, 2), 10);
  DensityElement mixed =
      DensityElement::basis(half, 0) + DensityElement::basis(half, 1);
  DensityElement g = grading_operator(mixed);
  CHECK(g.component(0) == Rational(1, 2));
  CHECK(g.component(1) == Rational(3, 2));
}

TEST_CASE("translation operator: power rule and nilpotence") {
  ModuleSpec spec(Rational(0), 10);
  DensityElement cube = DensityElement::basis(spec, 3);
  CHECK(translation_operator(cube).component(2) == Rational(-3));
  CHECK(translation_operator(DensityElement::basis(spec, 0)).is_zero());

  for (int n = 0; n <= 6; ++n) {
    DensityElement e = DensityElement::basis(spec, n);
    for (int k = 0; k <= n; ++k) e = translation_operator(e);
    CHECK(e.is_zero());
  }
}

TEST_CASE("derivation action: Lie derivative on weight-lambda densities") {
  ModuleSpec spec(Rational(1, 3), 10);
  // v = -t d/dt acts by -(n + lambda) on t^n
  for (int n = 0; n <= 4; ++n) {
    DensityElement e = DensityElement::basis(spec, n);
    DensityElement out = derivation_action(witt_field(0), e);
    CHECK(density_equal(out, grading_operator(e).scaled(Rational(-1))));
  }
  // v = -t^2 d/dt kills the constant at lambda = 0
  ModuleSpec flat(Rational(0), 10);
  CHECK(derivation_action(witt_field(1), DensityElement::basis(flat, 0)).is_zero());

  // Jacobi consistency: action of [u,v] = commutator of actions
  for (int trial = 0; trial < 40; ++trial) {
    Prng prng = Prng::for_trial(3, "module_jacobi", trial);
    Derivation u = Derivation(prng.series(9, 0));
    Derivation v = Derivation(prng.series(9, 0));
    DensityElement e = DensityElement::basis(spec, static_cast<int>(prng.range(0, 3)));
    DensityElement lhs = derivation_action(lie_bracket(u, v), e);
    DensityElement rhs = derivation_action(u, derivation_action(v, e)) -
                         derivation_action(v, derivation_action(u, e));
    CHECK(density_equal(lhs, rhs));
  }
}

TEST_CASE("pullback action: frozen values") {
  ModuleSpec spec(Rational(1), 12);
  DensityElement e1 = DensityElement::basis(spec, 1);
  CHECK(density_equal(act_pullback(CoordinateChange::identity(8), e1), e1));

  DensityElement scaled = act_pullback(CoordinateChange::scaling(Rational(2), 8), e1);
  CHECK(scaled.component(1) == Rational(4));

  TruncatedSeries s(8);
  s.set(1, Rational(1));
  s.set(2, Rational(1));
  DensityElement e0 = DensityElement::basis(spec, 0);
  DensityElement out = act_pullback(CoordinateChange(s), e0);
  CHECK(out.component(0) == Rational(1));
  CHECK(out.component(1) == Rational(2));

  // fractional weight requires unipotent changes
  ModuleSpec half(Rational(1, 2), 12);
  CHECK_THROWS_AS(act_pullback(CoordinateChange::scaling(Rational(2), 8),
                               DensityElement::basis(half, 0)),
                  FractionalPowerUndefined);
  CHECK(act_pullback(CoordinateChange(s), DensityElement::basis(half, 0))
            .component(1) == Rational(1));
}

TEST_CASE("representation law and pullback-exponential compatibility") {
  ModuleSpec spec(Rational(1), 12);
  for (int trial = 0; trial < 60; ++trial) {
    Prng prng = Prng::for_trial(21, "rep_law", trial);
    CoordinateChange rho = prng.coordinate_change(8);
    CoordinateChange mu = prng.coordinate_change(8);
    DensityElement e = DensityElement::basis(spec, static_cast<int>(prng.range(0, 2)));
    CHECK(density_equal(act_pullback(group_compose(rho, mu), e),
                        act_pullback(rho, act_pullback(mu, e))));
  }
  // the mirrored order fails on a scaling/unipotent witness
  CoordinateChange rho = CoordinateChange::scaling(Rational(2), 8);
  TruncatedSeries s(8);
  s.set(1, Rational(1));
  s.set(2, Rational(1));
  CoordinateChange mu(s);
  DensityElement e = DensityElement::basis(spec, 1);
  CHECK(!density_equal(act_pullback(group_compose(rho, mu), e),
                       act_pullback(mu, act_pullback(rho, e))));

  // exp compatibility: R(exp v) = sum over derivation powers
  for (int trial = 0; trial < 20; ++trial) {
    Prng prng = Prng::for_trial(25, "exp_compat", trial);
    Derivation v = prng.positive_derivation(9);
    CoordinateChange flow = exp_derivation(v);
    DensityElement x = DensityElement::basis(spec, static_cast<int>(prng.range(0, 2)));
    DensityElement lhs = act_pullback(flow, x);
    DensityElement rhs = x;
    DensityElement term = x;
    Rational kfact(1);
    for (int k = 1; k <= spec.grade_cutoff + 1 && !term.is_zero(); ++k) {
      term = derivation_action(v, term);
      kfact *= Rational(k);
      rhs = rhs + term.scaled(Rational(1) / kfact);
    }
    CHECK(density_equal(lhs, rhs));
  }
}

TEST_CASE("unipotent changes act as the identity on graded quotients") {
  ModuleSpec spec(Rational(1), 12);
  for (int trial = 0; trial < 30; ++trial) {
    Prng prng = Prng::for_trial(29, "graded_identity", trial);
    CoordinateChange rho = prng.unipotent_change(8);
    int n = static_cast<int>(prng.range(0, 5));
    DensityElement e = DensityElement::basis(spec, n);
    DensityElement diff = act_pullback(rho, e) - e;
    CHECK(filtration_truncate(diff, n + 1).is_zero());
  }
}

TEST_CASE("admissibility certificate") {
  CHECK(check_admissible(ModuleSpec(Rational(1), 10)).pass);
  CHECK(check_admissible(ModuleSpec(Rational(0), 0)).pass);

  // mis-signed grading operator must be flagged on the grading axiom
  DensityModuleOps bad;
  bad.grading = [](const DensityElement& e) {
    return grading_operator(e).scaled(Rational(-1));
  };
  CheckReport rep = check_admissible(ModuleSpec(Rational(1), 6), bad);
  CHECK(!rep.pass);
  CHECK(rep.first_counterexample.find("grading") != std::string::npos);
}

TEST_CASE("filtration truncation and dimension counts") {
  ModuleSpec spec(Rational(1), 10);
  DensityElement e = DensityElement::basis(spec, 4) + DensityElement::basis(spec, 7);
  CHECK(density_equal(filtration_truncate(e, 11), e));
  CHECK(filtration_truncate(e, 0).is_zero());
  DensityElement cut = filtration_truncate(e, 5);
  CHECK(cut.component(4) == Rational(1));
  CHECK(cut.component(7) == Rational(0));

  // one-dimensional graded pieces: dim G_{<=m} - dim G_{<=m-1} = 1
  auto dim_up_to = [&](int m) {
    int d = 0;
    for (int n = 0; n <= spec.grade_cutoff; ++n)
      if (spec.grade_of(n) <= Rational(m)) ++d;
    return d;
  };
  for (int m = 1; m <= 11; ++m) CHECK(dim_up_to(m) - dim_up_to(m - 1) == 1);
}

TEST_CASE("truncation flags scope every exactness claim") {
  ModuleSpec spec(Rational(0), 3);
  DensityElement top = DensityElement::basis(spec, 3);
  TruncatedSeries s(8);
  s.set(1, Rational(1));
  s.set(2, Rational(1));
  DensityElement pushed = act_pullback(CoordinateChange(s), top);
  CHECK(pushed.truncated_above());
  CHECK(!pushed.flag_free());
  DensityElement safe = act_pullback(CoordinateChange(s), DensityElement::basis(spec, 0));
  CHECK(!safe.truncated_above());
}
