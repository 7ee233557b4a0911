#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "formaldisc/json_io.hpp"
#include "formaldisc/prng.hpp"
#include "formaldisc/version.hpp"

namespace formaldisc {

/// Everything a verification run needs: working orders, seed, optional user
/// data, and the list of registered checks to execute.
struct SuiteSpec {
  int truncation_order = 8;
  int grade_cutoff = 12;
  std::uint64_t seed = 42;
  int expansion_order = 6;
  int trials = 100;
  ModuleSpec module{Rational(1), 12};
  std::vector<CoordinateChange> coordinate_changes;
  std::vector<RationalSection> sections;
  std::vector<std::string> tests;
};

struct TestRecord {
  std::string name;
  std::string status;  // pass | fail | skipped
  long trials = 0;
  std::string first_counterexample;
  double wall_time = 0.0;
};

struct VerificationReport {
  std::vector<TestRecord> tests;
  std::uint64_t seed = 0;
  int truncation_order = 0;
  int grade_cutoff = 0;
  int expansion_order = 0;
  std::string version = kVersion;

  bool all_pass() const {
    for (const auto& t : tests)
      if (t.status == "fail") return false;
    return true;
  }
};

namespace suite_detail {

using CheckFn = std::function<CheckReport(const SuiteSpec&)>;

struct RegisteredCheck {
  CheckFn run;
  bool negative_control = false;  // expected to fail; passes by failing
};

inline CheckReport run_group_law(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "group_law";
  const int N = spec.truncation_order;
  for (int t = 0; t < spec.trials; ++t) {
    Prng prng = Prng::for_trial(spec.seed, "group_law", t);
    CoordinateChange a = prng.coordinate_change(N);
    CoordinateChange b = t < static_cast<int>(spec.coordinate_changes.size())
                             ? spec.coordinate_changes[t]
                             : prng.coordinate_change(N);
    CoordinateChange c = prng.coordinate_change(N);
    ++rep.trials;
    if (group_compose(group_compose(a, b), c) != group_compose(a, group_compose(b, c))) {
      rep.fail("associativity fails at trial " + std::to_string(t));
      return rep;
    }
    CoordinateChange e = CoordinateChange::identity(N);
    if (group_compose(a, e) != a || group_compose(e, a) != a) {
      rep.fail("identity law fails at trial " + std::to_string(t));
      return rep;
    }
    CoordinateChange inv = group_inverse(a);
    int window = a.truncation_order();
    if (!equal_up_to(group_compose(a, inv).series(), TruncatedSeries::identity(window),
                     window) ||
        !equal_up_to(group_compose(inv, a).series(), TruncatedSeries::identity(window),
                     window)) {
      rep.fail("two-sided inverse fails at trial " + std::to_string(t));
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_exp_log(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "exp_log";
  const int N = std::max(spec.truncation_order, 3);
  for (int t = 0; t < spec.trials; ++t) {
    Prng prng = Prng::for_trial(spec.seed, "exp_log", t);
    Derivation v = prng.positive_derivation(N);
    CoordinateChange flow = exp_derivation(v);
    Derivation back = log_coordinate_change(flow);
    ++rep.trials;
    if (!equal_up_to(back.coefficient_series(), v.coefficient_series(), N)) {
      rep.fail("log(exp(v)) != v at trial " + std::to_string(t));
      return rep;
    }
    CoordinateChange rho = prng.unipotent_change(N);
    CoordinateChange round = exp_derivation(log_coordinate_change(rho));
    if (!equal_up_to(round.series(), rho.series(), N)) {
      rep.fail("exp(log(rho)) != rho at trial " + std::to_string(t));
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_canonical_differential(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "canonical_differential";
  for (int N = 2; N <= 4; ++N) {
    MonomialAction action = multiplication_action(N);
    EndValuedDifferential omega = canonical_differential(action);
    if (mutate)
      omega.terms()[0].coefficient.set(-1, Rational(2));  // perturb one coefficient
    for (int t = 0; t < std::max(1, spec.trials / 10); ++t) {
      Prng prng = Prng::for_trial(spec.seed, "canonical_differential", N * 1000 + t);
      CoordinateChange rho = prng.unipotent_change(spec.truncation_order);
      CheckReport inv = check_differential_invariance(omega, rho, action,
                                                      linear_monomial_transport(action));
      ++rep.trials;
      if (!inv.pass) {
        rep.fail("module dimension " + std::to_string(N) + ", trial " +
                 std::to_string(t) + ": " + inv.first_counterexample);
        return rep;
      }
    }
  }
  return rep;
}

inline CheckReport run_residue_invariance(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "residue_invariance";
  const int N = std::max(spec.truncation_order, 8);
  for (int t = 0; t < spec.trials; ++t) {
    Prng prng = Prng::for_trial(spec.seed, "residue_invariance", t);
    LaurentSeries f = prng.laurent(6, N);
    CoordinateChange rho = t < static_cast<int>(spec.coordinate_changes.size())
                               ? spec.coordinate_changes[t]
                               : prng.coordinate_change(N);
    LaurentSeries pulled = laurent_compose(f, rho.series()) *
                           LaurentSeries{derive(rho.series())};
    ++rep.trials;
    if (pulled.residue() != f.residue()) {
      rep.fail("trial " + std::to_string(t) + ": residue " + pulled.residue().to_string() +
               " vs " + f.residue().to_string());
      return rep;
    }
    // total derivatives have no residue
    if (derive(f).residue() != Rational(0)) {
      rep.fail("trial " + std::to_string(t) + ": residue of a derivative is nonzero");
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_shuffle(const SuiteSpec&) {
  CheckReport rep;
  rep.name = "shuffle";
  auto choose = [](int m, int p) {
    long long r = 1;
    for (int i = 0; i < p; ++i) r = r * (m - i) / (i + 1);
    return r;
  };
  for (int m = 2; m <= 7; ++m)
    for (int p = 1; p < m; ++p) {
      ++rep.trials;
      auto J = enumerate_shuffles(m, p);
      if (static_cast<long long>(J.permutations.size()) != choose(m, p)) {
        rep.fail("|J_{" + std::to_string(m) + "," + std::to_string(p) + "}| != C(m,p)");
        return rep;
      }
    }
  // symmetric section vanishes at (2,1)
  RatPoly sym = RatPoly::variable(2, 0) * RatPoly::variable(2, 1);
  ++rep.trials;
  if (!shuffle_sum(RationalSection::polynomial(sym), 1).numerator().is_zero()) {
    rep.fail("symmetric z1 z2 does not vanish at (2,1)");
    return rep;
  }
  // antisymmetric control: exactly 2 (z1 - z2)
  RatPoly anti = RatPoly::variable(2, 0) - RatPoly::variable(2, 1);
  ++rep.trials;
  if (shuffle_sum(RationalSection::polynomial(anti), 1).numerator() !=
      anti.scaled(Rational(2))) {
    rep.fail("antisymmetric control is not 2(z1 - z2)");
    return rep;
  }
  // constructed vanishing case at n = 3
  RatPoly F3 = RatPoly::monomial(3, {2, 1, 0}, Rational(1)) +
               RatPoly::monomial(3, {2, 0, 1}, Rational(1)) -
               RatPoly::monomial(3, {1, 0, 2}, Rational(1)) -
               RatPoly::monomial(3, {0, 1, 2}, Rational(1));
  ++rep.trials;
  if (!shuffle_sum(RationalSection::polynomial(F3), 1).numerator().is_zero()) {
    rep.fail("constructed n=3 kernel element does not vanish");
    return rep;
  }
  return rep;
}

inline std::vector<int> random_labels(Prng& prng, int n, int lo = 0, int hi = 4) {
  std::vector<int> m(n);
  for (int& x : m) x = static_cast<int>(prng.range(lo, hi));
  return m;
}

inline CheckReport run_T_derivative(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "T_derivative";
  for (int t = 0; t < std::max(1, spec.trials / 5); ++t) {
    Prng prng = Prng::for_trial(spec.seed, "T_derivative", t);
    int n = static_cast<int>(prng.range(1, 3));
    CovariantFamily fam = reference_family(n, !mutate);
    std::vector<int> labels = random_labels(prng, n);
    if (mutate) {
      // the no-factorial mutation only bites when some label is at least 2
      bool ok = false;
      for (int x : labels) ok = ok || x >= 2;
      if (!ok) labels[0] = 2;
    }
    for (int slot = 0; slot < n; ++slot) {
      CheckReport c = check_T_derivative(fam, labels, slot);
      ++rep.trials;
      if (!c.pass) {
        rep.fail("trial " + std::to_string(t) + ": " + c.first_counterexample);
        return rep;
      }
    }
  }
  return rep;
}

inline CheckReport run_translation(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "translation";
  for (int t = 0; t < std::max(1, spec.trials / 10); ++t) {
    Prng prng = Prng::for_trial(spec.seed, "translation", t);
    int n = static_cast<int>(prng.range(1, 3));
    CovariantFamily fam = reference_family(n, !mutate);
    std::vector<int> labels = random_labels(prng, n);
    if (mutate && labels[0] < 2) labels[0] = 2;
    CheckReport c = check_translation(fam, labels, spec.expansion_order);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("trial " + std::to_string(t) + ": " + c.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_insertion_expansion(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "insertion_expansion";
  for (int t = 0; t < std::max(1, spec.trials / 10); ++t) {
    Prng prng = Prng::for_trial(spec.seed, "insertion_expansion", t);
    int n = static_cast<int>(prng.range(1, 3));
    CovariantFamily fam = reference_family(n, !mutate);
    std::vector<int> labels = random_labels(prng, n);
    if (mutate && labels[0] < 2) labels[0] = 2;
    int slot = static_cast<int>(prng.range(0, n - 1));
    if (mutate) slot = 0;
    CheckReport c = check_insertion_expansion(fam, labels, slot, spec.expansion_order);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("trial " + std::to_string(t) + ": " + c.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_K_property(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "K_property";
  for (int t = 0; t < std::max(1, spec.trials / 5); ++t) {
    Prng prng = Prng::for_trial(spec.seed, "K_property", t);
    int n = static_cast<int>(prng.range(1, 3));
    CovariantFamily fam = reference_family(n, true, mutate);
    std::vector<int> labels = random_labels(prng, n);
    if (mutate) {
      bool ok = false;
      for (int x : labels) ok = ok || x >= 1;
      if (!ok) labels[0] = 1;
    }
    CheckReport c = check_K_property(fam, labels);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("trial " + std::to_string(t) + ": " + c.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_pole_bounds(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "pole_bounds";
  RatPoly one = RatPoly::constant(2, Rational(1));
  std::vector<std::vector<int>> b2{{0, 2}, {2, 0}};
  RationalSection F(2, one, b2);
  auto r1 = check_pole_bounds(F);
  rep.trials += r1.base.trials;
  if (!r1.base.pass || r1.computed[0][1] != 2) {
    rep.fail("1/(z1-z2)^2 should have exact pole order 2");
    return rep;
  }
  std::vector<std::vector<int>> claim{{0, 1}, {1, 0}};
  ++rep.trials;
  if (check_pole_bounds(F, &claim).base.pass) {
    rep.fail("claimed bound 1 against order 2 must fail");
    return rep;
  }
  RationalSection P = RationalSection::polynomial(RatPoly::variable(3, 0));
  auto r2 = check_pole_bounds(P);
  rep.trials += r2.base.trials;
  if (!r2.base.pass) {
    rep.fail("polynomial sections have no poles");
    return rep;
  }
  for (const auto& section : spec.sections) {
    auto r = check_pole_bounds(section);
    rep.trials += r.base.trials;
    if (!r.base.pass) {
      rep.fail("user section: " + r.base.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_insertion_composition(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "insertion_composition";
  InsertionFrame frame;
  frame.partition = {1, 1};
  frame.centers = {GaussianRational{Rational(1)}, GaussianRational{Rational(0)}};
  frame.expansion_order = std::max(spec.expansion_order, 8);
  RatPoly one = RatPoly::constant(2, Rational(1));
  for (int b = 1; b <= 2; ++b) {
    std::vector<std::vector<int>> beta{{0, b}, {b, 0}};
    CheckReport c = check_insertion_composition(RationalSection(2, one, beta), frame);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("1/(z1-z2)^" + std::to_string(b) + ": " + c.first_counterexample);
      return rep;
    }
  }
  RationalSection P =
      RationalSection::polynomial(RatPoly::variable(2, 0) * RatPoly::variable(2, 1));
  CheckReport c = check_insertion_composition(P, frame);
  rep.trials += c.trials;
  if (!c.pass) rep.fail("polynomial case: " + c.first_counterexample);
  return rep;
}

inline CheckReport run_section_invariance(const SuiteSpec& spec, bool mutate) {
  CheckReport rep;
  rep.name = "section_invariance";
  const int N = spec.truncation_order;
  for (int t = 0; t < std::max(1, spec.trials / 4); ++t) {
    Prng prng = Prng::for_trial(spec.seed, "section_invariance", t);
    int n = static_cast<int>(prng.range(1, 3));
    PointAtlas atlas;
    for (int j = 0; j < n; ++j)
      atlas.changes.push_back(prng.range(0, 1) == 0
                                  ? CoordinateChange::scaling(prng.small_nonzero_rational(), N)
                                  : prng.unipotent_change(N));
    std::vector<int> slots = random_labels(prng, n, 0, 3);
    CheckReport c = check_section_invariance(spec.module, slots, atlas,
                                             spec.expansion_order, mutate);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("trial " + std::to_string(t) + ": " + c.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_representation_law(const SuiteSpec& spec, bool mutate) {
  if (mutate) {
    CheckReport rep;
    rep.name = "representation_law";
    rep.trials = 1;
    if (representation_convention_witness(spec.module, spec.truncation_order))
      rep.fail("mirrored composition order differs on the witness pair (as it must)");
    return rep;
  }
  return check_representation_law(spec.module, spec.trials, spec.seed,
                                  spec.truncation_order);
}

inline CheckReport run_exact_sequence(const SuiteSpec& spec) {
  CheckReport rep;
  rep.name = "exact_sequence";
  int lo = 0;
  while (Rational(lo) < spec.module.lambda) ++lo;
  for (int m = lo; m <= spec.module.grade_cutoff; ++m) {
    CheckReport c = exact_sequence_check(spec.module, m);
    rep.trials += c.trials;
    if (!c.pass) {
      rep.fail("m = " + std::to_string(m) + ": " + c.first_counterexample);
      return rep;
    }
  }
  return rep;
}

inline CheckReport run_admissibility(const SuiteSpec& spec) {
  return check_admissible(spec.module, {}, spec.truncation_order);
}

inline const std::map<std::string, RegisteredCheck>& registry() {
  static const std::map<std::string, RegisteredCheck> reg = [] {
    std::map<std::string, RegisteredCheck> r;
    r["group_law"] = {run_group_law, false};
    r["exp_log"] = {run_exp_log, false};
    r["canonical_differential"] = {
        [](const SuiteSpec& s) { return run_canonical_differential(s, false); }, false};
    r["canonical_differential_mutation"] = {
        [](const SuiteSpec& s) { return run_canonical_differential(s, true); }, true};
    r["residue_invariance"] = {run_residue_invariance, false};
    r["shuffle"] = {run_shuffle, false};
    r["T_derivative"] = {[](const SuiteSpec& s) { return run_T_derivative(s, false); },
                         false};
    r["T_derivative_mutation"] = {
        [](const SuiteSpec& s) { return run_T_derivative(s, true); }, true};
    r["translation"] = {[](const SuiteSpec& s) { return run_translation(s, false); },
                        false};
    r["translation_mutation"] = {
        [](const SuiteSpec& s) { return run_translation(s, true); }, true};
    r["insertion_expansion"] = {
        [](const SuiteSpec& s) { return run_insertion_expansion(s, false); }, false};
    r["insertion_expansion_mutation"] = {
        [](const SuiteSpec& s) { return run_insertion_expansion(s, true); }, true};
    r["K_property"] = {[](const SuiteSpec& s) { return run_K_property(s, false); }, false};
    r["K_property_mutation"] = {
        [](const SuiteSpec& s) { return run_K_property(s, true); }, true};
    r["pole_bounds"] = {run_pole_bounds, false};
    r["insertion_composition"] = {run_insertion_composition, false};
    r["section_invariance"] = {
        [](const SuiteSpec& s) { return run_section_invariance(s, false); }, false};
    r["section_invariance_mutation"] = {
        [](const SuiteSpec& s) { return run_section_invariance(s, true); }, true};
    r["representation_law"] = {
        [](const SuiteSpec& s) { return run_representation_law(s, false); }, false};
    r["representation_law_mutation"] = {
        [](const SuiteSpec& s) { return run_representation_law(s, true); }, true};
    r["exact_sequence"] = {run_exact_sequence, false};
    r["admissibility"] = {run_admissibility, false};
    return r;
  }();
  return reg;
}

}  // namespace suite_detail

inline std::vector<std::string> registered_tests() {
  std::vector<std::string> names;
  for (const auto& [name, check] : suite_detail::registry()) names.push_back(name);
  return names;
}

/// The default full suite: every positive check, in registry order.
inline std::vector<std::string> default_tests() {
  std::vector<std::string> names;
  for (const auto& [name, check] : suite_detail::registry())
    if (!check.negative_control) names.push_back(name);
  return names;
}

/// Parses and validates a SuiteSpec; every invariant violation is reported
/// at parse time with the offending field.
inline SuiteSpec parse_spec(const std::string& text) {
  json j = parse_json_text(text);
  if (!j.is_object()) throw ValidationError("suite spec must be a JSON object");
  SuiteSpec spec;
  spec.truncation_order = j.value("truncation_order", spec.truncation_order);
  if (spec.truncation_order < 2)
    throw ValidationError("truncation_order must be at least 2");
  spec.grade_cutoff = j.value("grade_cutoff", spec.grade_cutoff);
  if (spec.grade_cutoff < 0) throw ValidationError("grade_cutoff must be non-negative");
  spec.seed = j.value("seed", spec.seed);
  spec.expansion_order = j.value("expansion_order", spec.expansion_order);
  if (spec.expansion_order < 1)
    throw ValidationError("expansion_order must be positive");
  spec.trials = j.value("trials", spec.trials);
  if (spec.trials < 1) throw ValidationError("trials must be positive");
  if (j.contains("module"))
    spec.module = module_spec_from_json(j.at("module"));
  else
    spec.module = ModuleSpec(Rational(1), spec.grade_cutoff);
  for (const auto& s : j.value("coordinate_changes", json::array())) {
    TruncatedSeries series = series_from_json(s);
    try {
      spec.coordinate_changes.emplace_back(series);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("coordinate_changes: ") + e.what());
    }
  }
  for (const auto& s : j.value("sections", json::array()))
    spec.sections.push_back(section_from_json(s));
  spec.tests = j.value("tests", std::vector<std::string>{});
  const auto& reg = suite_detail::registry();
  for (const auto& name : spec.tests)
    if (!reg.count(name))
      throw ValidationError("unknown test identifier \"" + name + "\"");
  return spec;
}

/// Canonical serialization; parse_spec(serialize_spec(s)) is the identity and
/// serialize_spec(parse_spec(text)) is a fixpoint on canonical files.
inline std::string serialize_spec(const SuiteSpec& spec) {
  json j;
  j["truncation_order"] = spec.truncation_order;
  j["grade_cutoff"] = spec.grade_cutoff;
  j["seed"] = spec.seed;
  j["expansion_order"] = spec.expansion_order;
  j["trials"] = spec.trials;
  j["module"] = to_json(spec.module);
  json changes = json::array();
  for (const auto& c : spec.coordinate_changes) changes.push_back(to_json(c.series()));
  j["coordinate_changes"] = changes;
  json sections = json::array();
  for (const auto& s : spec.sections) sections.push_back(to_json(s));
  j["sections"] = sections;
  j["tests"] = spec.tests;
  return j.dump(2) + "\n";
}

/// Executes every named check with deterministic seeding; unknown names
/// throw, negative controls pass by failing.
inline VerificationReport run_suite(const SuiteSpec& spec) {
  VerificationReport report;
  report.seed = spec.seed;
  report.truncation_order = spec.truncation_order;
  report.grade_cutoff = spec.grade_cutoff;
  report.expansion_order = spec.expansion_order;
  const auto& reg = suite_detail::registry();
  for (const auto& name : spec.tests) {
    auto it = reg.find(name);
    if (it == reg.end()) throw UnknownTest("unknown test \"" + name + "\"");
    auto start = std::chrono::steady_clock::now();
    CheckReport result = it->second.run(spec);
    auto stop = std::chrono::steady_clock::now();
    TestRecord record;
    record.name = name;
    record.trials = result.trials;
    if (it->second.negative_control) {
      record.status = result.pass ? "fail" : "pass";
      record.first_counterexample =
          result.pass ? "negative control unexpectedly passed its underlying check"
                      : "expected failure observed: " + result.first_counterexample;
    } else {
      record.status = result.pass ? "pass" : "fail";
      record.first_counterexample = result.first_counterexample;
    }
    record.wall_time =
        std::chrono::duration_cast<std::chrono::duration<double>>(stop - start).count();
    report.tests.push_back(std::move(record));
  }
  return report;
}

/// Canonical JSON (sorted keys, "p/q" rationals, no timings so bytes are
/// reproducible) or a fixed-width text table with timings.
inline std::string emit_report(const VerificationReport& report,
                               const std::string& format) {
  if (format == "json") {
    json j;
    j["meta"] = json{{"seed", report.seed},
                     {"truncation_order", report.truncation_order},
                     {"grade_cutoff", report.grade_cutoff},
                     {"expansion_order", report.expansion_order},
                     {"version", report.version}};
    json tests = json::array();
    for (const auto& t : report.tests)
      tests.push_back(json{{"name", t.name},
                           {"status", t.status},
                           {"trials", t.trials},
                           {"first_counterexample", t.first_counterexample}});
    j["tests"] = tests;
    return j.dump(2) + "\n";
  }
  if (format != "text")
    throw ValidationError("emit_report: format must be json or text");
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-34s %-7s %8s %10s\n", "test", "status", "trials",
                "time(s)");
  out += buf;
  out += std::string(62, '-') + "\n";
  for (const auto& t : report.tests) {
    std::snprintf(buf, sizeof buf, "%-34s %-7s %8ld %10.3f\n", t.name.c_str(),
                  t.status.c_str(), t.trials, t.wall_time);
    out += buf;
    if (t.status == "fail" && !t.first_counterexample.empty())
      out += "    counterexample: " + t.first_counterexample + "\n";
  }
  std::snprintf(buf, sizeof buf, "seed=%llu order=%d cutoff=%d expansion=%d version=%s\n",
                static_cast<unsigned long long>(report.seed), report.truncation_order,
                report.grade_cutoff, report.expansion_order, report.version.c_str());
  out += buf;
  return out;
}

}  // namespace formaldisc
