// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expects the CLI binary path and the suites directory as arguments
// so the determinism criterion can drive the real executable.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "formaldisc/suite.hpp"
#include "formaldisc/torsor_twist.hpp"
#include "oracles.hpp"

using namespace formaldisc;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double elapsed = std::chrono::duration_cast<std::chrono::duration<double>>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  if (elapsed > budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget: ") +
              std::to_string(elapsed) + "s > " + std::to_string(budget_seconds) + "s";
  }
  std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
              title.c_str(), elapsed, detail.empty() || ok ? "" : " -- ",
              detail.empty() || ok ? "" : detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string suites = argc > 2 ? argv[2] : "suites";

  criterion(1, "compositional inversion through order 6", 1.0, [](std::string& why) {
    TruncatedSeries f(6);
    f.set(1, Rational(1));
    f.set(2, Rational(1));
    TruncatedSeries g = invert_composition(f);
    const Rational expect[] = {Rational(1), Rational(-1), Rational(2), Rational(-5),
                               Rational(14)};
    for (int d = 1; d < 6; ++d)
      if (g.coeff(d) != expect[d - 1]) {
        why = "coefficient at degree " + std::to_string(d) + " is " +
              g.coeff(d).to_string();
        return false;
      }
    if (g != oracles::lagrange_invert(f, 6)) {
      why = "disagrees with the Lagrange inversion oracle";
      return false;
    }
    return equal_up_to(compose(f, g), TruncatedSeries::identity(6), 6) &&
           equal_up_to(compose(g, f), TruncatedSeries::identity(6), 6);
  });

  criterion(2, "group and representation laws, 200 randomized pairs", 10.0,
            [](std::string& why) {
              ModuleSpec module(Rational(1), 12);
              for (int t = 0; t < 200; ++t) {
                Prng prng = Prng::for_trial(42, "acceptance_group", t);
                CoordinateChange a = prng.coordinate_change(8);
                CoordinateChange b = prng.coordinate_change(8);
                CoordinateChange c = prng.coordinate_change(8);
                if (group_compose(group_compose(a, b), c) !=
                    group_compose(a, group_compose(b, c))) {
                  why = "associativity fails at trial " + std::to_string(t);
                  return false;
                }
                CoordinateChange inv = group_inverse(a);
                if (!equal_up_to(group_compose(a, inv).series(),
                                 TruncatedSeries::identity(8), 8) ||
                    !equal_up_to(group_compose(inv, a).series(),
                                 TruncatedSeries::identity(8), 8)) {
                  why = "two-sided inverse fails at trial " + std::to_string(t);
                  return false;
                }
                DensityElement e =
                    DensityElement::basis(module, static_cast<int>(prng.range(0, 2)));
                DensityElement lhs = act_pullback(group_compose(a, b), e);
                DensityElement rhs = act_pullback(a, act_pullback(b, e));
                if (lhs.truncated_above() || rhs.truncated_above()) {
                  why = "witness not flag-free at trial " + std::to_string(t);
                  return false;
                }
                if (!density_equal(lhs, rhs)) {
                  why = "homomorphism law fails at trial " + std::to_string(t);
                  return false;
                }
              }
              return true;
            });

  criterion(3, "exp/log roundtrip, 100 random positive derivations at order 10", 5.0,
            [](std::string& why) {
              for (int t = 0; t < 100; ++t) {
                Prng prng = Prng::for_trial(42, "acceptance_explog", t);
                Derivation v = prng.positive_derivation(10);
                if (!equal_up_to(
                        log_coordinate_change(exp_derivation(v)).coefficient_series(),
                        v.coefficient_series(), 10)) {
                  why = "log(exp(v)) != v at trial " + std::to_string(t);
                  return false;
                }
                CoordinateChange rho = prng.unipotent_change(10);
                if (!equal_up_to(exp_derivation(log_coordinate_change(rho)).series(),
                                 rho.series(), 10)) {
                  why = "exp(log(rho)) != rho at trial " + std::to_string(t);
                  return false;
                }
              }
              return true;
            });

  criterion(4, "canonical differential invariance, N in {2,3,4}, 20 changes each", 5.0,
            [](std::string& why) {
              for (int N = 2; N <= 4; ++N) {
                MonomialAction action = multiplication_action(N);
                EndValuedDifferential omega = canonical_differential(action);
                ActionTransport transport = linear_monomial_transport(action);
                for (int t = 0; t < 20; ++t) {
                  Prng prng = Prng::for_trial(42, "acceptance_canonical", N * 100 + t);
                  CoordinateChange rho = prng.unipotent_change(10);
                  CheckReport rep =
                      check_differential_invariance(omega, rho, action, transport);
                  if (!rep.pass) {
                    why = "N=" + std::to_string(N) + ": " + rep.first_counterexample;
                    return false;
                  }
                }
                EndValuedDifferential mutated = omega;
                mutated.terms()[0].coefficient.set(-1, Rational(2));
                TruncatedSeries s(10);
                s.set(1, Rational(1));
                s.set(2, Rational(1));
                if (check_differential_invariance(mutated, CoordinateChange(s), action,
                                                  transport)
                        .pass) {
                  why = "mutation control passed at N=" + std::to_string(N);
                  return false;
                }
              }
              return true;
            });

  criterion(5, "residue invariance, 100 (f, rho) pairs at depth <= 6", 5.0,
            [](std::string& why) {
              for (int t = 0; t < 100; ++t) {
                Prng prng = Prng::for_trial(42, "acceptance_residue", t);
                LaurentSeries f = prng.laurent(6, 10);
                CoordinateChange rho = prng.coordinate_change(10);
                LaurentSeries pulled = laurent_compose(f, rho.series()) *
                                       LaurentSeries{derive(rho.series())};
                if (pulled.residue() != f.residue()) {
                  why = "trial " + std::to_string(t);
                  return false;
                }
              }
              return true;
            });

  criterion(6, "shuffle identities and cardinalities", 2.0, [](std::string& why) {
    auto choose = [](int m, int p) {
      long long r = 1;
      for (int i = 0; i < p; ++i) r = r * (m - i) / (i + 1);
      return r;
    };
    for (int m = 2; m <= 7; ++m)
      for (int p = 1; p < m; ++p)
        if (static_cast<long long>(enumerate_shuffles(m, p).permutations.size()) !=
            choose(m, p)) {
          why = "cardinality at (" + std::to_string(m) + "," + std::to_string(p) + ")";
          return false;
        }
    RatPoly z1 = RatPoly::variable(2, 0), z2 = RatPoly::variable(2, 1);
    if (!shuffle_sum(RationalSection::polynomial(z1 * z2), 1).numerator().is_zero()) {
      why = "symmetric case not vanishing";
      return false;
    }
    RatPoly F3 = RatPoly::monomial(3, {2, 1, 0}, Rational(1)) +
                 RatPoly::monomial(3, {2, 0, 1}, Rational(1)) -
                 RatPoly::monomial(3, {1, 0, 2}, Rational(1)) -
                 RatPoly::monomial(3, {0, 1, 2}, Rational(1));
    if (!shuffle_sum(RationalSection::polynomial(F3), 1).numerator().is_zero()) {
      why = "constructed n=3 case not vanishing";
      return false;
    }
    RatPoly anti = z1 - z2;
    if (shuffle_sum(RationalSection::polynomial(anti), 1).numerator() !=
        anti.scaled(Rational(2))) {
      why = "antisymmetric control is not exactly 2(z1 - z2)";
      return false;
    }
    return true;
  });

  criterion(7, "covariance checkers pass; all four mutations fail", 5.0,
            [](std::string& why) {
              std::vector<int> labels{2, 1};
              CovariantFamily fam = reference_family(2);
              for (int slot = 0; slot < 2; ++slot) {
                if (!check_T_derivative(fam, labels, slot).pass ||
                    !check_insertion_expansion(fam, labels, slot, 6).pass) {
                  why = "reference family fails at slot " + std::to_string(slot);
                  return false;
                }
              }
              if (!check_translation(fam, labels, 6).pass ||
                  !check_K_property(fam, labels).pass) {
                why = "reference family fails translation or K";
                return false;
              }
              CovariantFamily nofact = reference_family(2, false);
              CovariantFamily posk = reference_family(2, true, true);
              if (check_T_derivative(nofact, labels, 0).pass) {
                why = "T-derivative mutation did not fail";
                return false;
              }
              if (check_translation(nofact, labels, 6).pass) {
                why = "translation mutation did not fail";
                return false;
              }
              if (check_insertion_expansion(nofact, labels, 0, 6).pass) {
                why = "insertion mutation did not fail";
                return false;
              }
              if (check_K_property(posk, labels).pass) {
                why = "K-property mutation did not fail";
                return false;
              }
              return true;
            });

  criterion(8, "insertion composition matches block expansions through order 8", 2.0,
            [](std::string& why) {
              InsertionFrame frame;
              frame.partition = {1, 1};
              frame.centers = {GaussianRational{Rational(1)},
                               GaussianRational{Rational(0)}};
              frame.expansion_order = 8;
              RatPoly one = RatPoly::constant(2, Rational(1));
              for (int b = 1; b <= 2; ++b) {
                RationalSection F(2, one, {{0, b}, {b, 0}});
                if (!check_insertion_composition(F, frame).pass) {
                  why = "two-route identity fails at beta = " + std::to_string(b);
                  return false;
                }
                FrameExpansion fe = expand_around_frame(F, frame);
                if (fe.expansion != to_gauss(oracles::geometric_series_oracle(b, 8))) {
                  why = "termwise disagreement with the geometric oracle at beta = " +
                        std::to_string(b);
                  return false;
                }
              }
              return true;
            });

  criterion(9, "section invariance, 50 random atlases, n in {1,2,3}", 30.0,
            [](std::string& why) {
              ModuleSpec module(Rational(1), 12);
              for (int t = 0; t < 50; ++t) {
                Prng prng = Prng::for_trial(42, "acceptance_invariance", t);
                int n = 1 + t % 3;
                PointAtlas atlas;
                for (int j = 0; j < n; ++j)
                  atlas.changes.push_back(
                      prng.range(0, 1) == 0
                          ? CoordinateChange::scaling(prng.small_nonzero_rational(), 8)
                          : prng.unipotent_change(8));
                std::vector<int> slots(n);
                for (int& x : slots) x = static_cast<int>(prng.range(0, 3));
                CheckReport rep = check_section_invariance(module, slots, atlas, 6);
                if (!rep.pass) {
                  why = "trial " + std::to_string(t) + ": " + rep.first_counterexample;
                  return false;
                }
              }
              // the Jacobian-weight mutation fails at the leading coefficient
              PointAtlas sc;
              sc.changes = {CoordinateChange::scaling(Rational(2), 8)};
              CheckReport bad = check_section_invariance(module, {2}, sc, 6, true);
              if (bad.pass || bad.first_counterexample.find("degree 2") ==
                                  std::string::npos) {
                why = "mutation control did not fail at leading order";
                return false;
              }
              return true;
            });

  criterion(10, "filtration dimension additivity and graded identity, m <= 12", 1.0,
            [](std::string& why) {
              ModuleSpec module(Rational(1), 12);
              for (int m = 1; m <= 12; ++m) {
                CheckReport rep = exact_sequence_check(module, m);
                if (!rep.pass) {
                  why = "m = " + std::to_string(m) + ": " + rep.first_counterexample;
                  return false;
                }
              }
              return true;
            });

  criterion(11, "CLI determinism: byte-identical golden report", 120.0,
            [&](std::string& why) {
              if (cli.empty()) {
                why = "CLI path not supplied";
                return false;
              }
              std::string spec_path = suites + "/default.json";
              std::string out1 = "acceptance_report_1.json";
              std::string out2 = "acceptance_report_2.json";
              std::string cmd1 =
                  cli + " verify " + spec_path + " --format json --out " + out1;
              std::string cmd2 =
                  cli + " verify " + spec_path + " --format json --out " + out2;
              if (std::system(cmd1.c_str()) != 0 || std::system(cmd2.c_str()) != 0) {
                why = "CLI returned nonzero";
                return false;
              }
              std::string r1 = slurp(out1);
              std::string r2 = slurp(out2);
              std::remove(out1.c_str());
              std::remove(out2.c_str());
              if (r1 != r2) {
                why = "two consecutive runs differ";
                return false;
              }
              std::string golden = slurp(suites + "/golden_report.json");
              if (r1 != golden) {
                why = "report differs from the committed golden bytes";
                return false;
              }
              return true;
            });

  if (failures == 0) std::printf("all acceptance criteria passed\n");
  return failures == 0 ? 0 : 1;
}
