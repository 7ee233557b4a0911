#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "formaldisc/config_rational.hpp"
#include "formaldisc/coord_change.hpp"
#include "formaldisc/density_module.hpp"
#include "formaldisc/differentials.hpp"
#include "formaldisc/series.hpp"
#include "formaldisc/torsor_twist.hpp"

namespace formaldisc {

using json = nlohmann::json;

// Rationals travel as fixed "p/q" strings so no precision is ever lost.
inline json to_json(const Rational& r) { return r.canonical_string(); }

inline Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw ValidationError("expected a rational as \"p/q\"");
  return Rational::from_string(j.get<std::string>());
}

inline json to_json(const GaussianRational& z) {
  return json::array({to_json(z.re), to_json(z.im)});
}

inline GaussianRational gaussian_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw ValidationError("expected a complex rational as [\"re\",\"im\"]");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline json to_json(const TruncatedSeries& s) {
  if (s.is_exact())
    throw ValidationError("series serialization requires a finite truncation order");
  json coeffs = json::array();
  for (const auto& [d, c] : s.coefficients()) coeffs.push_back(json::array({d, to_json(c)}));
  return json{{"coefficients", coeffs}, {"truncation_order", s.truncation_order()}};
}

inline TruncatedSeries series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("truncation_order"))
    throw ValidationError("series requires a truncation_order field");
  int order = j.at("truncation_order").get<int>();
  if (order < 1) throw ValidationError("truncation_order must be positive");
  TruncatedSeries s(order);
  for (const auto& pair : j.value("coefficients", json::array())) {
    if (!pair.is_array() || pair.size() != 2)
      throw ValidationError("series coefficients must be [degree, \"p/q\"] pairs");
    int d = pair[0].get<int>();
    if (d < 0) throw ValidationError("series degrees must be non-negative");
    if (d >= order) throw ValidationError("series degree at or above truncation_order");
    s.set(d, rational_from_json(pair[1]));
  }
  return s;
}

inline json to_json(const Derivation& v) {
  json j = to_json(v.coefficient_series());
  j["kind"] = "derivation";
  return j;
}

inline Derivation derivation_from_json(const json& j) {
  return Derivation(series_from_json(j));
}

inline json to_json(const KDifferential& d) {
  json principal = json::array();
  for (const auto& [deg, c] : d.density.principal())
    principal.push_back(json::array({deg, to_json(c)}));
  json regular = json::array();
  for (const auto& [deg, c] : d.density.regular().coefficients())
    regular.push_back(json::array({deg, to_json(c)}));
  return json{{"weight", to_json(d.weight)},
              {"principal", principal},
              {"regular", regular},
              {"truncation_order", d.density.known_bound()}};
}

inline KDifferential kdifferential_from_json(const json& j) {
  int order = j.at("truncation_order").get<int>();
  LaurentSeries f{TruncatedSeries(order)};
  for (const auto& pair : j.value("principal", json::array()))
    f.set(pair[0].get<int>(), rational_from_json(pair[1]));
  for (const auto& pair : j.value("regular", json::array()))
    f.set(pair[0].get<int>(), rational_from_json(pair[1]));
  return {rational_from_json(j.at("weight")), std::move(f)};
}

inline json to_json(const ModuleSpec& m) {
  return json{{"lambda", to_json(m.lambda)}, {"grade_cutoff", m.grade_cutoff}};
}

inline ModuleSpec module_spec_from_json(const json& j) {
  return ModuleSpec(rational_from_json(j.at("lambda")), j.at("grade_cutoff").get<int>());
}

inline json to_json(const DensityElement& e) {
  json comps = json::array();
  for (const auto& [n, c] : e.components()) comps.push_back(json::array({n, to_json(c)}));
  json j = to_json(e.spec());
  j["components"] = comps;
  return j;
}

inline DensityElement density_from_json(const json& j) {
  DensityElement e(module_spec_from_json(j));
  for (const auto& pair : j.value("components", json::array()))
    e.set_component(pair[0].get<int>(), rational_from_json(pair[1]));
  return e;
}

inline json to_json(const RationalSection& F) {
  const int n = F.n_points();
  json numerator = json::array();
  for (const auto& [e, c] : F.numerator().terms()) {
    json term = json::array();
    for (int x : e) term.push_back(x);
    term.push_back(to_json(c));
    numerator.push_back(term);
  }
  json beta = json::array();
  for (const auto& row : F.pole_orders()) beta.push_back(row);
  json labels{{"lambda", to_json(F.labels().lambda)}};
  labels["m"] = F.labels().m;
  return json{{"n", n}, {"numerator", numerator}, {"beta", beta}, {"labels", labels}};
}

inline RationalSection section_from_json(const json& j) {
  int n = j.at("n").get<int>();
  if (n < 1) throw ValidationError("section: n must be positive");
  RatPoly num(n);
  for (const auto& term : j.value("numerator", json::array())) {
    if (!term.is_array() || static_cast<int>(term.size()) != n + 1)
      throw ValidationError("section numerator terms must be [d_1..d_n, \"p/q\"]");
    RatPoly::Exponents e(n);
    for (int i = 0; i < n; ++i) e[i] = term[i].get<int>();
    num.add_term(e, rational_from_json(term[n]));
  }
  std::vector<std::vector<int>> beta(n, std::vector<int>(n, 0));
  if (j.contains("beta")) {
    const json& b = j.at("beta");
    if (static_cast<int>(b.size()) != n) throw ValidationError("section: beta must be n x n");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(b[i].size()) != n)
        throw ValidationError("section: beta must be n x n");
      for (int k = 0; k < n; ++k) beta[i][k] = b[i][k].get<int>();
    }
  }
  SlotLabels labels;
  if (j.contains("labels")) {
    labels.lambda = rational_from_json(j.at("labels").value("lambda", json("0/1")));
    labels.m = j.at("labels").value("m", std::vector<int>{});
  }
  return RationalSection(n, std::move(num), std::move(beta), std::move(labels));
}

inline json to_json(const PointAtlas& a) {
  json changes = json::array();
  for (const auto& c : a.changes) changes.push_back(to_json(c.series()));
  json centers = json::array();
  for (const auto& z : a.centers) centers.push_back(to_json(z));
  return json{{"n", a.n_points()}, {"changes", changes}, {"centers", centers}};
}

inline PointAtlas atlas_from_json(const json& j) {
  PointAtlas a;
  for (const auto& s : j.value("changes", json::array()))
    a.changes.emplace_back(series_from_json(s));
  for (const auto& z : j.value("centers", json::array()))
    a.centers.push_back(gaussian_from_json(z));
  if (j.contains("n") && j.at("n").get<int>() != a.n_points())
    throw ValidationError("atlas: n does not match the number of changes");
  a.validate();
  return a;
}

/// Byte offset -> (line, column), for parse diagnostics.
inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    auto [line, col] = line_column(text, err.byte > 0 ? err.byte - 1 : 0);
    throw ParseError("JSON parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + err.what());
  }
}

}  // namespace formaldisc
