#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formaldisc/differentials.hpp"
#include "formaldisc/prng.hpp"

using namespace formaldisc;

namespace {
CoordinateChange t_plus_t2(int order) {
  TruncatedSeries s(order);
  s.set(1, Rational(1));
  s.set(2, Rational(1));
  return CoordinateChange(s);
}
}  // namespace

TEST_CASE("pullback of k-differentials") {
  // k = 0: plain composition, constants unchanged
  KDifferential c0{Rational(0), LaurentSeries{TruncatedSeries::constant(Rational(5), 8)}};
  KDifferential p0 = pullback_kdifferential(c0, t_plus_t2(8));
  CHECK(p0.density.coeff(0) == Rational(5));
  for (int d = 1; d < 6; ++d) CHECK(p0.density.coeff(d) == Rational(0));

  // k = 1, density 1, rho = 2t: new density 2
  KDifferential c1{Rational(1), LaurentSeries{TruncatedSeries::constant(Rational(1), 8)}};
  KDifferential p1 = pullback_kdifferential(c1, CoordinateChange::scaling(Rational(2), 8));
  CHECK(p1.density.coeff(0) == Rational(2));

  // k = 2, density 1, rho = t + t^2: (1 + 2t)^2 = 1 + 4t + 4t^2
  KDifferential c2{Rational(2), LaurentSeries{TruncatedSeries::constant(Rational(1), 8)}};
  KDifferential p2 = pullback_kdifferential(c2, t_plus_t2(8));
  CHECK(p2.density.coeff(0) == Rational(1));
  CHECK(p2.density.coeff(1) == Rational(4));
  CHECK(p2.density.coeff(2) == Rational(4));

  // fractional weight demands a unipotent change
  KDifferential ch{Rational(1, 2), LaurentSeries{TruncatedSeries::constant(Rational(1), 8)}};
  CHECK_THROWS_AS(pullback_kdifferential(ch, CoordinateChange::scaling(Rational(3), 8)),
                  FractionalPowerUndefined);
  CHECK_NOTHROW(pullback_kdifferential(ch, t_plus_t2(8)));
}

TEST_CASE("pullback functoriality and identity") {
  for (int trial = 0; trial < 40; ++trial) {
    Prng prng = Prng::for_trial(15, "pullback_functorial", trial);
    CoordinateChange rho = prng.coordinate_change(9);
    CoordinateChange mu = prng.coordinate_change(9);
    for (long long k : {-1LL, 0LL, 1LL, 2LL}) {
      KDifferential d{Rational(k), prng.laurent(2, 9)};
      KDifferential two = pullback_kdifferential(pullback_kdifferential(d, rho), mu);
      KDifferential one = pullback_kdifferential(d, group_compose(mu, rho));
      int window = std::min({two.density.known_bound(), one.density.known_bound(), 4});
      CHECK(equal_up_to(two.density, one.density, window));
      KDifferential same = pullback_kdifferential(d, CoordinateChange::identity(9));
      CHECK(equal_up_to(same.density, d.density,
                        std::min(same.density.known_bound(), d.density.known_bound())));
    }
  }
}

TEST_CASE("canonical differential: finite assembly and frozen values") {
  // zero action -> omega = 0
  MonomialAction zero;
  zero.dim = 2;
  zero.positive_bound = 1;
  zero.op = [](int) { return RatMatrix::zero(2); };
  EndValuedDifferential w0 = canonical_differential(zero);
  CHECK(w0.flatten_apply({Rational(1), Rational(0)}).is_zero());

  // multiplication on Q[t]/t^N applied to 1 folds to N t^-1
  for (int N = 2; N <= 3; ++N) {
    MonomialAction act = multiplication_action(N);
    EndValuedDifferential omega = canonical_differential(act);
    std::vector<Rational> one(N);
    one[0] = Rational(1);
    LaurentSeries val = omega.flatten_apply(one);
    CHECK(val.coeff(-1) == Rational(N));
    for (int d = -N; d < 2; ++d)
      if (d != -1) CHECK(val.coeff(d) == Rational(0));
  }

  // a non-nilpotent action is rejected
  MonomialAction bad;
  bad.dim = 2;
  bad.positive_bound = 1;
  bad.op = [](int n) {
    RatMatrix m(2, 2);
    if (n == 1) {
      m.at(0, 0) = Rational(1);
      m.at(1, 1) = Rational(1);
    } else if (n == 0) {
      m.at(0, 0) = Rational(1);
      m.at(1, 1) = Rational(1);
    }
    return m;
  };
  CHECK_THROWS_AS(canonical_differential(bad), NotNilpotent);
}

TEST_CASE("canonical differential is coordinate independent") {
  for (int N = 2; N <= 4; ++N) {
    MonomialAction act = multiplication_action(N);
    EndValuedDifferential omega = canonical_differential(act);
    ActionTransport transport = linear_monomial_transport(act);
    CHECK(check_differential_invariance(omega, CoordinateChange::identity(10), act,
                                        transport)
              .pass);
    for (int trial = 0; trial < 20; ++trial) {
      Prng prng = Prng::for_trial(19, "canonical_invariance", N * 100 + trial);
      CoordinateChange rho = prng.unipotent_change(10);
      CheckReport rep = check_differential_invariance(omega, rho, act, transport);
      CHECK_MESSAGE(rep.pass, rep.first_counterexample);
    }
    // single-coefficient mutation is located
    EndValuedDifferential mutated = omega;
    mutated.terms()[0].coefficient.set(-1, Rational(2));
    CheckReport rep =
        check_differential_invariance(mutated, t_plus_t2(10), act, transport);
    CHECK(!rep.pass);
    CHECK(!rep.first_counterexample.empty());
  }
}

TEST_CASE("residue pairing") {
  std::vector<KDifferential> eta;
  eta.emplace_back(Rational(1), LaurentSeries::monomial(Rational(1), -1, 8));
  std::vector<LaurentSeries> mu{LaurentSeries{TruncatedSeries::constant(Rational(1), 8)}};
  CHECK(residue_pairing(eta, mu)[0] == Rational(1));

  std::vector<KDifferential> reg;
  reg.emplace_back(Rational(1), LaurentSeries{TruncatedSeries::constant(Rational(1), 8)});
  std::vector<LaurentSeries> anything{LaurentSeries{TruncatedSeries::identity(8)}};
  CHECK(residue_pairing(reg, anything)[0] == Rational(0));

  std::vector<KDifferential> pole3;
  pole3.emplace_back(Rational(1), LaurentSeries::monomial(Rational(1), -3, 8));
  std::vector<LaurentSeries> sq{LaurentSeries{TruncatedSeries::monomial(Rational(1), 2, 8)}};
  CHECK(residue_pairing(pole3, sq)[0] == Rational(1));

  std::vector<KDifferential> wrong;
  wrong.emplace_back(Rational(2), LaurentSeries::monomial(Rational(1), -1, 8));
  CHECK_THROWS_AS(residue_pairing(wrong, mu), ValidationError);

  // invariance under simultaneous coordinate change (weight 1 + weight 0)
  for (int trial = 0; trial < 40; ++trial) {
    Prng prng = Prng::for_trial(33, "pairing_invariance", trial);
    CoordinateChange rho = prng.coordinate_change(10);
    KDifferential a{Rational(1), prng.laurent(3, 10)};
    LaurentSeries b = prng.laurent(3, 10);
    Rational before = residue(a.density * b);
    KDifferential ap = pullback_kdifferential(a, rho);
    LaurentSeries bp = laurent_compose(b, rho.series());
    CHECK(residue(ap.density * bp) == before);
  }
}
