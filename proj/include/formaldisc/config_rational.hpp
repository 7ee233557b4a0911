#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "formaldisc/multipoly.hpp"
#include "formaldisc/report.hpp"

namespace formaldisc {

// ---------------------------------------------------------------------------
// permutations (0-based images: sigma[i] is where slot i goes)

inline int permutation_sign(const std::vector<int>& sigma) {
  int inv = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] > sigma[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

inline std::vector<int> permutation_inverse(const std::vector<int>& sigma) {
  std::vector<int> inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = static_cast<int>(i);
  return inv;
}

// ---------------------------------------------------------------------------

/// Per-slot module data attached to a configuration-space section: a shared
/// density weight and one basis index per slot.
struct SlotLabels {
  Rational lambda;
  std::vector<int> m;
};

/// Rational function on F_n(C): a polynomial numerator over the pole divisor
/// prod_{i<j} (z_i - z_j)^{beta_ij}. The pole matrix is symmetric with zero
/// diagonal; the actual pole order never exceeds the stored exponent.
class RationalSection {
public:
  RationalSection(int n, RatPoly numerator, std::vector<std::vector<int>> beta,
                  SlotLabels labels = {})
      : n_(n),
        numerator_(std::move(numerator)),
        beta_(std::move(beta)),
        labels_(std::move(labels)) {
    if (n_ < 1) throw ValidationError("RationalSection: n must be positive");
    if (numerator_.nvars() != n_)
      throw ValidationError("RationalSection: numerator arity mismatch");
    if (static_cast<int>(beta_.size()) != n_)
      throw ValidationError("RationalSection: beta must be n x n");
    for (int i = 0; i < n_; ++i) {
      if (static_cast<int>(beta_[i].size()) != n_)
        throw ValidationError("RationalSection: beta must be n x n");
      if (beta_[i][i] != 0)
        throw ValidationError("RationalSection: beta diagonal must be zero");
      for (int j = 0; j < n_; ++j) {
        if (beta_[i][j] < 0)
          throw ValidationError("RationalSection: negative pole order");
        if (beta_[i][j] != beta_[j][i])
          throw ValidationError("RationalSection: beta must be symmetric");
      }
    }
    if (!labels_.m.empty() && static_cast<int>(labels_.m.size()) != n_)
      throw ValidationError("RationalSection: slot label count mismatch");
  }

  static RationalSection polynomial(RatPoly p) {
    int n = p.nvars();
    return RationalSection(n, std::move(p),
                           std::vector<std::vector<int>>(n, std::vector<int>(n, 0)));
  }

  int n_points() const { return n_; }
  const RatPoly& numerator() const { return numerator_; }
  const std::vector<std::vector<int>>& pole_orders() const { return beta_; }
  const SlotLabels& labels() const { return labels_; }
  bool is_polynomial() const {
    for (const auto& row : beta_)
      for (int b : row)
        if (b != 0) return false;
    return true;
  }

private:
  int n_;
  RatPoly numerator_;
  std::vector<std::vector<int>> beta_;
  SlotLabels labels_;
};

/// Exact value at a configuration-space point; the point must avoid every
/// diagonal.
inline GaussianRational evaluate_at(const RationalSection& F,
                                    const std::vector<GaussianRational>& point) {
  const int n = F.n_points();
  if (static_cast<int>(point.size()) != n)
    throw ValidationError("evaluate_at: point arity mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (point[i] == point[j])
        throw OnDiagonal("evaluate_at: z_" + std::to_string(i + 1) + " = z_" +
                         std::to_string(j + 1));
  GaussianRational den{Rational(1)};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (F.pole_orders()[i][j] > 0)
        den *= (point[i] - point[j]).pow(F.pole_orders()[i][j]);
  return to_gauss(F.numerator()).eval(point) / den;
}

/// Left S_n action: sigma(F)(x) = F with slot i reading z_{sigma(i)}.
/// Pole factors with flipped orientation contribute (-1)^beta to the
/// numerator; slot labels move with their variables.
inline RationalSection permute_action(const std::vector<int>& sigma,
                                      const RationalSection& F) {
  const int n = F.n_points();
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("permute_action: permutation arity mismatch");
  RatPoly num = F.numerator().relabel(sigma);
  std::vector<std::vector<int>> beta(n, std::vector<int>(n, 0));
  Rational sign(1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int b = F.pole_orders()[i][j];
      if (b == 0) continue;
      beta[sigma[i]][sigma[j]] = b;
      beta[sigma[j]][sigma[i]] = b;
      if (sigma[i] > sigma[j] && b % 2 == 1) sign = -sign;
    }
  if (sign != Rational(1)) num = num.scaled(sign);
  SlotLabels labels = F.labels();
  if (!labels.m.empty()) {
    std::vector<int> m(n);
    for (int i = 0; i < n; ++i) m[sigma[i]] = labels.m[i];
    labels.m = std::move(m);
  }
  return RationalSection(n, std::move(num), std::move(beta), std::move(labels));
}

// ---------------------------------------------------------------------------
// shuffles

/// The (p, m-p) shuffles: permutations keeping the first p and last m-p
/// images in increasing order, enumerated lexicographically.
struct ShuffleSet {
  int m = 0;
  int p = 0;
  std::vector<std::vector<int>> permutations;  // 0-based images
};

inline ShuffleSet enumerate_shuffles(int m, int p) {
  if (m < 2 || p < 1 || p > m - 1)
    throw BadRange("enumerate_shuffles: need 1 <= p <= m-1");
  ShuffleSet out{m, p, {}};
  std::vector<int> pick(p);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<int> sigma(m);
    std::vector<bool> used(m, false);
    for (int i = 0; i < p; ++i) {
      sigma[i] = pick[i];
      used[pick[i]] = true;
    }
    int at = p;
    for (int v = 0; v < m; ++v)
      if (!used[v]) sigma[at++] = v;
    out.permutations.push_back(std::move(sigma));
    // next combination in lexicographic order
    int i = p - 1;
    while (i >= 0 && pick[i] == m - p + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

/// sum over the inverted shuffle set of sign(sigma) sigma^{-1}(F), on a
/// common pole divisor. A vanishing numerator is the identity holding as an
/// exact polynomial identity.
inline RationalSection shuffle_sum(const RationalSection& F, int p) {
  const int n = F.n_points();
  ShuffleSet J = enumerate_shuffles(n, p);
  std::vector<RationalSection> terms;
  std::vector<Rational> signs;
  for (const auto& sigma : J.permutations) {
    terms.push_back(permute_action(permutation_inverse(sigma), F));
    signs.push_back(Rational(permutation_sign(sigma)));
  }
  std::vector<std::vector<int>> common(n, std::vector<int>(n, 0));
  for (const auto& t : terms)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        common[i][j] = std::max(common[i][j], t.pole_orders()[i][j]);
  RatPoly acc(n);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    RatPoly num = terms[k].numerator().scaled(signs[k]);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int extra = common[i][j] - terms[k].pole_orders()[i][j];
        if (extra > 0) {
          RatPoly diff = RatPoly::variable(n, i) - RatPoly::variable(n, j);
          num = num * diff.pow(extra);
        }
      }
    acc = acc + num;
  }
  return RationalSection(n, std::move(acc), std::move(common), F.labels());
}

// ---------------------------------------------------------------------------
// covariant families and their checkers

/// A family of configuration-space functions indexed by per-slot labels,
/// together with the translation action on labels and the K-grading data.
/// The built-in reference family is F = prod_j z_j^{m_j} / m_j! with
/// translation m -> m-1 and K-grade -m.
struct CovariantFamily {
  int n = 0;
  Rational lambda;           // weight per differential slot
  Rational declared_weight;  // d in z^{K_G} F = z^d F
  std::function<RatPoly(const std::vector<int>&)> realize;
  std::function<std::vector<int>(std::vector<int>, int)> translate;  // T at slot
  std::function<Rational(int)> k_grade;
};

inline CovariantFamily reference_family(int n, bool with_factorial = true,
                                        bool positive_k_grade = false) {
  CovariantFamily fam;
  fam.n = n;
  fam.lambda = Rational(0);
  fam.declared_weight = Rational(0);
  fam.realize = [n, with_factorial](const std::vector<int>& m) {
    RatPoly p = RatPoly::constant(n, Rational(1));
    for (int j = 0; j < n; ++j) {
      if (m[j] < 0) return RatPoly(n);
      Rational c = with_factorial ? Rational(1) / Rational::factorial(m[j]) : Rational(1);
      RatPoly::Exponents e(n, 0);
      e[j] = m[j];
      p = p * RatPoly::monomial(n, std::move(e), c);
    }
    return p;
  };
  fam.translate = [](std::vector<int> m, int slot) {
    m[slot] -= 1;
    return m;
  };
  fam.k_grade = [positive_k_grade](int m) {
    return positive_k_grade ? Rational(m) : Rational(-m);
  };
  return fam;
}

/// d/dz_i F(labels) = F(T_i labels) as polynomial identities, plus the
/// summed form sum_i d/dz_i F = T_G F.
inline CheckReport check_T_derivative(const CovariantFamily& fam,
                                      const std::vector<int>& labels, int slot) {
  CheckReport report;
  report.name = "T_derivative";
  RatPoly F = fam.realize(labels);
  RatPoly lhs = F.partial_derivative(slot);
  RatPoly rhs = fam.realize(fam.translate(labels, slot));
  ++report.trials;
  if (lhs != rhs) {
    report.fail("slot " + std::to_string(slot + 1) + ": d/dz F = " + lhs.to_string() +
                " but F(T labels) = " + rhs.to_string());
    return report;
  }
  RatPoly sum_l(fam.n), sum_r(fam.n);
  for (int i = 0; i < fam.n; ++i) {
    sum_l = sum_l + F.partial_derivative(i);
    sum_r = sum_r + fam.realize(fam.translate(labels, i));
  }
  if (sum_l != sum_r)
    report.fail("summed form: sum_i d/dz_i F differs from T_G F");
  return report;
}

namespace detail {
/// Distributes k applications of the translation over the chosen slots:
/// label multiset with exact coefficients.
inline std::map<std::vector<int>, Rational> translated_labels(
    const CovariantFamily& fam, const std::vector<int>& labels, int k,
    int only_slot /* -1 for all slots */) {
  std::map<std::vector<int>, Rational> cur{{labels, Rational(1)}};
  for (int step = 0; step < k; ++step) {
    std::map<std::vector<int>, Rational> next;
    for (const auto& [l, c] : cur) {
      if (only_slot >= 0) {
        auto [it, fresh] = next.emplace(fam.translate(l, only_slot), c);
        if (!fresh) it->second += c;
      } else {
        for (int i = 0; i < fam.n; ++i) {
          auto [it, fresh] = next.emplace(fam.translate(l, i), c);
          if (!fresh) it->second += c;
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline RatPoly realize_combination(const CovariantFamily& fam,
                                   const std::map<std::vector<int>, Rational>& combo) {
  RatPoly out(fam.n);
  for (const auto& [l, c] : combo) out = out + fam.realize(l).scaled(c);
  return out;
}

/// F with the given slots shifted by a fresh formal variable s (index n).
inline RatPoly shift_by_formal(const RatPoly& F, int only_slot) {
  const int n = F.nvars();
  std::vector<RatPoly> repl;
  repl.reserve(n);
  for (int i = 0; i < n; ++i) {
    RatPoly r = RatPoly::variable(n + 1, i);
    if (only_slot < 0 || only_slot == i) r = r + RatPoly::variable(n + 1, n);
    repl.push_back(std::move(r));
  }
  return F.substitute_all(repl);
}
}  // namespace detail

/// e^{sT_G} F = F(z + s): compares the two sides of the translation law as
/// polynomials in the formal shift s, degree by degree up to the order.
inline CheckReport check_translation(const CovariantFamily& fam,
                                     const std::vector<int>& labels, int order) {
  CheckReport report;
  report.name = "translation";
  RatPoly shifted = detail::shift_by_formal(fam.realize(labels), -1);
  auto by_s = shifted.collect_by_power(fam.n);
  Rational kfact(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) kfact *= Rational(k);
    RatPoly rhs =
        detail::realize_combination(fam, detail::translated_labels(fam, labels, k, -1))
            .scaled(Rational(1) / kfact)
            .extended(1);
    auto it = by_s.find(k);
    RatPoly lhs = it == by_s.end() ? RatPoly(fam.n + 1) : it->second;
    ++report.trials;
    if (lhs != rhs) {
      report.fail("mismatch at shift order " + std::to_string(k));
      return report;
    }
  }
  return report;
}

/// Exact squared-modulus guard for the insertion disk
/// |z| < min_{i != j} |z_i - z_j|.
inline void require_in_insertion_disk(const std::vector<GaussianRational>& points,
                                      const GaussianRational& shift) {
  Rational zn = shift.norm();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (!(zn < (points[i] - points[j]).norm()))
        throw DomainViolation("insertion shift leaves the convergence disk at pair (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    }
}

/// Single-slot insertion law: F with slot i shifted by s equals
/// sum_k s^k/k! F(T_i^k labels), term by term up to the order. When
/// evaluation points and a concrete shift are supplied, the disk guard is
/// enforced first.
inline CheckReport check_insertion_expansion(
    const CovariantFamily& fam, const std::vector<int>& labels, int slot, int order,
    const std::vector<GaussianRational>* points = nullptr,
    const GaussianRational* shift = nullptr) {
  CheckReport report;
  report.name = "insertion_expansion";
  if (points && shift) require_in_insertion_disk(*points, *shift);
  RatPoly shifted = detail::shift_by_formal(fam.realize(labels), slot);
  auto by_s = shifted.collect_by_power(fam.n);
  Rational kfact(1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) kfact *= Rational(k);
    RatPoly rhs =
        detail::realize_combination(fam, detail::translated_labels(fam, labels, k, slot))
            .scaled(Rational(1) / kfact)
            .extended(1);
    auto it = by_s.find(k);
    RatPoly lhs = it == by_s.end() ? RatPoly(fam.n + 1) : it->second;
    ++report.trials;
    if (lhs != rhs) {
      report.fail("slot " + std::to_string(slot + 1) + ": mismatch at shift order " +
                  std::to_string(k));
      return report;
    }
  }
  return report;
}

/// K_G covariance: z^{sum_j kappa(m_j) + n lambda} F(z z_n) = z^d F(z_n) as
/// an identity in the formal scalar z; per monomial this is exact degree
/// bookkeeping.
inline CheckReport check_K_property(const CovariantFamily& fam,
                                    const std::vector<int>& labels) {
  CheckReport report;
  report.name = "K_property";
  Rational base = Rational(fam.n) * fam.lambda;
  for (int j = 0; j < fam.n; ++j) base += fam.k_grade(labels[j]);
  RatPoly F = fam.realize(labels);
  for (const auto& [e, c] : F.terms()) {
    ++report.trials;
    int deg = 0;
    for (int x : e) deg += x;
    if (base + Rational(deg) != fam.declared_weight) {
      report.fail("monomial of total degree " + std::to_string(deg) +
                  " scales by z^" + (base + Rational(deg)).to_string() +
                  ", declared weight " + fam.declared_weight.to_string());
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// pole bounds

/// Vanishing order of the numerator along z_j = z_i, or INT_MAX for the zero
/// polynomial: substitute z_j = z_i + eps and find the least eps power.
inline int diagonal_vanishing_order(const RatPoly& num, int i, int j) {
  if (num.is_zero()) return std::numeric_limits<int>::max();
  const int n = num.nvars();
  std::vector<RatPoly> repl;
  repl.reserve(n);
  for (int k = 0; k < n; ++k) {
    if (k == j)
      repl.push_back(RatPoly::variable(n + 1, i) + RatPoly::variable(n + 1, n));
    else
      repl.push_back(RatPoly::variable(n + 1, k));
  }
  RatPoly sub = num.substitute_all(repl);
  int best = std::numeric_limits<int>::max();
  for (const auto& [e, c] : sub.terms()) best = std::min(best, e[n]);
  return best;
}

struct PoleReport {
  CheckReport base;
  /// computed[i][j]: exact pole order at z_i = z_j (negative means the
  /// numerator vanishes deeper than the divisor); INT_MIN for zero sections.
  std::vector<std::vector<int>> computed;
};

/// Exact pole order at each diagonal versus a claimed bound (defaulting to
/// the section's own matrix). Sound and complete on this representation.
inline PoleReport check_pole_bounds(const RationalSection& F,
                                    const std::vector<std::vector<int>>* claimed = nullptr) {
  const int n = F.n_points();
  PoleReport out;
  out.base.name = "pole_bounds";
  out.computed.assign(n, std::vector<int>(n, 0));
  const auto& bound = claimed ? *claimed : F.pole_orders();
  if (static_cast<int>(bound.size()) != n)
    throw ValidationError("check_pole_bounds: claimed bound arity mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ++out.base.trials;
      int v = diagonal_vanishing_order(F.numerator(), i, j);
      int order = v == std::numeric_limits<int>::max()
                      ? std::numeric_limits<int>::min()
                      : F.pole_orders()[i][j] - v;
      out.computed[i][j] = out.computed[j][i] = order;
      if (order > bound[i][j])
        out.base.fail("pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                      "): pole order " + std::to_string(order) + " exceeds bound " +
                      std::to_string(bound[i][j]));
    }
  return out;
}

// ---------------------------------------------------------------------------
// insertion frames

/// A partition of the slots into blocks around pairwise-distinct centers,
/// with an expansion order for the local offsets.
struct InsertionFrame {
  std::vector<int> partition;            // block sizes l_1..l_k
  std::vector<GaussianRational> centers; // zeta_1..zeta_k
  int expansion_order = 0;
  int insertion_count = 0;  // the k of Theta(n, k, G, U); carried as metadata

  void validate(int n_slots) const {
    if (partition.size() != centers.size())
      throw ValidationError("InsertionFrame: one center per block required");
    int total = 0;
    for (int l : partition) {
      if (l <= 0) throw ValidationError("InsertionFrame: empty block");
      total += l;
    }
    if (total != n_slots)
      throw ValidationError("InsertionFrame: partition does not cover the slots");
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        if (centers[i] == centers[j])
          throw ValidationError("InsertionFrame: centers must be distinct");
    if (expansion_order < 1)
      throw ValidationError("InsertionFrame: expansion order must be positive");
  }

  /// Block index of each slot, in partition order.
  std::vector<int> block_of(int n_slots) const {
    std::vector<int> b(n_slots);
    int at = 0;
    for (std::size_t blk = 0; blk < partition.size(); ++blk)
      for (int r = 0; r < partition[blk]; ++r) b[at++] = static_cast<int>(blk);
    return b;
  }
};

/// Strict convergence-domain test of the frame at concrete points:
/// |z_p - zeta_i| + |z_q - zeta_j| < |zeta_i - zeta_j| for all cross pairs,
/// decided exactly on squared moduli.
inline bool in_convergence_domain(const InsertionFrame& frame,
                                  const std::vector<GaussianRational>& points) {
  frame.validate(static_cast<int>(points.size()));
  auto block = frame.block_of(static_cast<int>(points.size()));
  for (std::size_t p = 0; p < points.size(); ++p)
    for (std::size_t q = p + 1; q < points.size(); ++q) {
      int bi = block[p], bj = block[q];
      if (bi == bj) continue;
      Rational A = (points[p] - frame.centers[bi]).norm();
      Rational B = (points[q] - frame.centers[bj]).norm();
      Rational C = (frame.centers[bi] - frame.centers[bj]).norm();
      if (!sum_of_moduli_less(A, B, C)) return false;
    }
  return true;
}

/// (c + delta)^{-beta} as a polynomial in the offsets, truncated at total
/// degree K: the geometric series for 1/(c + delta), then a truncated power.
inline GaussPoly geometric_inverse(const GaussianRational& c, const GaussPoly& delta,
                                   int beta, int K) {
  const int n = delta.nvars();
  GaussianRational cinv = GaussianRational{Rational(1)} / c;
  GaussPoly inv1(n);
  GaussPoly pw = GaussPoly::constant(n, cinv);
  inv1 = inv1 + pw;
  for (int k = 1; k <= K; ++k) {
    pw = (pw * delta).truncate_total(K).scaled(-cinv);
    if (pw.is_zero()) break;
    inv1 = inv1 + pw;
  }
  GaussPoly out = GaussPoly::constant(n, GaussianRational{Rational(1)});
  for (int b = 0; b < beta; ++b) out = (out * inv1).truncate_total(K);
  return out;
}

/// Recentered data of a section under a frame: the graded expansion in the
/// local offsets (cross-block pole factors inverted by geometric series,
/// truncated at the expansion order), the recentered numerator, and the
/// cross-block divisor polynomial. Same-block factors are untouched: they
/// stay poles of the local data on both sides.
struct FrameExpansion {
  GaussPoly expansion;  // in the offsets u_1..u_n, total degree <= order
  GaussPoly numerator;  // numerator recentered at the block centers
  GaussPoly divisor;    // product of the expanded cross-block factors
};

inline FrameExpansion expand_around_frame(const RationalSection& F,
                                          const InsertionFrame& frame,
                                          int degree_cap = 64) {
  const int n = F.n_points();
  frame.validate(n);
  const int K = frame.expansion_order;
  if (K > degree_cap || F.numerator().total_degree() + K > degree_cap)
    throw ExpansionBudgetExceeded("expand_around_frame: expansion order " +
                                  std::to_string(K) + " exceeds the degree cap");
  auto block = frame.block_of(n);

  // recenter the numerator: z_s = zeta_{block(s)} + u_s
  std::vector<GaussPoly> repl;
  repl.reserve(n);
  for (int s = 0; s < n; ++s)
    repl.push_back(GaussPoly::constant(n, frame.centers[block[s]]) +
                   GaussPoly::variable(n, s));
  FrameExpansion out{GaussPoly(n), to_gauss(F.numerator()).substitute_all(repl),
                     GaussPoly::constant(n, GaussianRational{Rational(1)})};

  out.expansion = out.numerator.truncate_total(K);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int b = F.pole_orders()[i][j];
      if (b == 0 || block[i] == block[j]) continue;
      GaussianRational c = frame.centers[block[i]] - frame.centers[block[j]];
      GaussPoly delta = GaussPoly::variable(n, i) - GaussPoly::variable(n, j);
      out.expansion =
          (out.expansion * geometric_inverse(c, delta, b, K)).truncate_total(K);
      for (int rep = 0; rep < b; ++rep)
        out.divisor = out.divisor * (GaussPoly::constant(n, c) + delta);
    }
  return out;
}

/// Desk-scale surrogate for the insertion-composition axiom: expands F
/// around the frame centers and verifies that multiplying the expansion back
/// by the cross-block divisor reproduces the recentered numerator, exactly
/// through the expansion order.
inline CheckReport check_insertion_composition(const RationalSection& F,
                                               const InsertionFrame& frame,
                                               int degree_cap = 64) {
  CheckReport report;
  report.name = "insertion_composition";
  FrameExpansion fe = expand_around_frame(F, frame, degree_cap);
  const int K = frame.expansion_order;
  GaussPoly back = (fe.expansion * fe.divisor).truncate_total(K);
  GaussPoly target = fe.numerator.truncate_total(K);
  ++report.trials;
  if (back != target) {
    GaussPoly diff = back - target;
    report.fail("expansion times divisor misses the numerator; first stray term " +
                diff.terms().begin()->second.to_string());
  }
  return report;
}

// ---------------------------------------------------------------------------
// section vectors

/// The n-entry vector whose j-th entry carries the differential slots in the
/// cyclic order starting at j; all entries share the same rational data.
struct SectionVector {
  RationalSection base;
  std::vector<std::vector<int>> orderings;

  int n_points() const { return base.n_points(); }
};

inline SectionVector build_section_vector(RationalSection F) {
  const int n = F.n_points();
  SectionVector out{std::move(F), {}};
  out.orderings.reserve(n);
  for (int j = 0; j < n; ++j) {
    std::vector<int> o(n);
    for (int k = 0; k < n; ++k) o[k] = (j + k) % n;
    out.orderings.push_back(std::move(o));
  }
  return out;
}

}  // namespace formaldisc
