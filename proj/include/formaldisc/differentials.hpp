#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "formaldisc/coord_change.hpp"
#include "formaldisc/report.hpp"
#include "formaldisc/series.hpp"

namespace formaldisc {

/// f(t) (dt)^k on the punctured disc.
struct KDifferential {
  Rational weight;
  LaurentSeries density;

  KDifferential(Rational k, LaurentSeries f)
      : weight(std::move(k)), density(std::move(f)) {}
};

inline KDifferential operator+(const KDifferential& a, const KDifferential& b) {
  if (a.weight != b.weight)
    throw ValidationError("KDifferential: addition requires equal weights");
  return {a.weight, a.density + b.density};
}

inline KDifferential operator*(const KDifferential& a, const KDifferential& b) {
  return {a.weight + b.weight, a.density * b.density};
}

/// g(rho(t)) (rho'(t))^k (dt)^k. For non-integer k the change must be
/// unipotent so (rho')^k has a rational binomial expansion.
inline KDifferential pullback_kdifferential(const KDifferential& d,
                                            const CoordinateChange& rho,
                                            int depth_cap = kDefaultLaurentDepth) {
  TruncatedSeries rp = derive(rho.series());
  TruncatedSeries jac;
  if (d.weight.is_integer()) {
    long long k = d.weight.num().to_int();
    jac = k == 0 ? TruncatedSeries::constant(Rational(1), rp.truncation_order())
                 : pow_int(rp, static_cast<int>(k));
  } else {
    if (!rho.is_unipotent())
      throw FractionalPowerUndefined(
          "pullback_kdifferential: fractional weight needs a unipotent change");
    jac = pow_unipotent(rp, d.weight);
  }
  LaurentSeries pulled = laurent_compose(d.density, rho.series(), depth_cap);
  return {d.weight, pulled * LaurentSeries{jac}};
}

/// Dense matrix with exact rational entries, used for operator actions on
/// small finite-dimensional modules.
class RatMatrix {
public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(rows, std::vector<Rational>(cols)) {}

  static RatMatrix zero(int n) { return RatMatrix(n, n); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& at(int i, int j) { return a_[i][j]; }
  const Rational& at(int i, int j) const { return a_[i][j]; }

  bool is_zero() const {
    for (const auto& row : a_)
      for (const auto& v : row)
        if (!v.is_zero()) return false;
    return true;
  }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    std::vector<Rational> y(rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!a_[i][j].is_zero()) y[i] += a_[i][j] * x[j];
    return y;
  }

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix r(a.rows_, a.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r.a_[i][j] = a.a_[i][j] + b.a_[i][j];
    return r;
  }
  RatMatrix scaled(const Rational& c) const {
    RatMatrix r(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.a_[i][j] = a_[i][j] * c;
    return r;
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<Rational>> a_;
};

/// In-place row reduction; returns the rank. Exact.
inline int row_reduce(std::vector<std::vector<Rational>>& m) {
  int rank = 0;
  if (m.empty()) return 0;
  const int cols = static_cast<int>(m[0].size());
  for (int col = 0; col < cols && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    Rational inv = Rational(1) / m[rank][col];
    for (auto& v : m[rank]) v *= inv;
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      Rational f = m[r][col];
      for (int c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

/// A linear map attaching to each Laurent monomial t^n an operator on a
/// finite-dimensional module, zero below -negative_depth and above
/// positive_bound.
struct MonomialAction {
  int dim = 0;
  int negative_depth = 0;  // op(n) = 0 for n < -negative_depth
  int positive_bound = 0;  // op(n) = 0 for n > positive_bound
  std::function<RatMatrix(int)> op;

  RatMatrix operator()(int n) const {
    if (n < -negative_depth || n > positive_bound) return RatMatrix::zero(dim);
    return op(n);
  }
};

/// Multiplication by t^n on Q[t]/t^N; negative monomials act as zero.
inline MonomialAction multiplication_action(int N) {
  MonomialAction a;
  a.dim = N;
  a.negative_depth = 0;
  a.positive_bound = N - 1;
  a.op = [N](int n) {
    RatMatrix m(N, N);
    if (n >= 0)
      for (int j = 0; j + n < N; ++j) m.at(j + n, j) = Rational(1);
    return m;
  };
  return a;
}

/// Verifies that the operators attached to the maximal ideal (n >= 1) kill
/// every vector after finitely many applications: the image filtration
/// V_{j+1} = sum_n op(n) V_j must reach zero within dim steps.
inline bool certify_nilpotent(const MonomialAction& action) {
  std::vector<std::vector<Rational>> span(action.dim,
                                          std::vector<Rational>(action.dim));
  for (int i = 0; i < action.dim; ++i) span[i][i] = Rational(1);
  int rank = action.dim;
  for (int step = 0; step <= action.dim && rank > 0; ++step) {
    std::vector<std::vector<Rational>> next;
    for (const auto& v : span) {
      for (int n = 1; n <= action.positive_bound; ++n) {
        RatMatrix m = action(n);
        if (m.is_zero()) continue;
        auto img = m.apply(v);
        bool nz = false;
        for (const auto& x : img) nz = nz || !x.is_zero();
        if (nz) next.push_back(img);
      }
    }
    rank = row_reduce(next);
    next.resize(rank);
    span = std::move(next);
  }
  return rank == 0;
}

/// omega = sum_n op(n) t^(-n-1) dt, an End-valued differential of weight 1.
class EndValuedDifferential {
public:
  struct Term {
    int monomial_degree;  // the n the operator came from
    RatMatrix op;
    LaurentSeries coefficient;
  };

  EndValuedDifferential() = default;
  explicit EndValuedDifferential(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  std::vector<Term>& terms() { return terms_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(int n, RatMatrix op, LaurentSeries coeff) {
    terms_.push_back({n, std::move(op), std::move(coeff)});
  }

  /// omega applied to a module vector: one Laurent series per component.
  std::vector<LaurentSeries> apply(const std::vector<Rational>& alpha) const {
    std::vector<LaurentSeries> out(dim_);
    for (const auto& t : terms_) {
      auto img = t.op.apply(alpha);
      for (int k = 0; k < dim_; ++k)
        if (!img[k].is_zero()) out[k] = out[k] + t.coefficient.scaled(img[k]);
    }
    return out;
  }

  /// Reads the module basis vector e_k as t^k and folds the applied value
  /// into a single Laurent series.
  LaurentSeries flatten_apply(const std::vector<Rational>& alpha) const {
    auto parts = apply(alpha);
    LaurentSeries total;
    for (int k = 0; k < dim_; ++k) total = total + parts[k].shifted(k);
    return total;
  }

private:
  int dim_ = 0;
  std::vector<Term> terms_;
};

/// Assembles the canonical differential for a nilpotently-acting map; the
/// sum is finite because the action vanishes outside the declared depth
/// bounds and module vectors die under the maximal ideal.
inline EndValuedDifferential canonical_differential(const MonomialAction& action) {
  if (!certify_nilpotent(action))
    throw NotNilpotent("canonical_differential: maximal-ideal action is not "
                       "nilpotent within the module cutoff");
  EndValuedDifferential omega(action.dim);
  for (int n = -action.negative_depth; n <= action.positive_bound; ++n) {
    RatMatrix m = action(n);
    if (m.is_zero()) continue;
    omega.add_term(n, std::move(m), LaurentSeries::monomial(Rational(1), -n - 1));
  }
  return omega;
}

/// Transport of the action to the coordinate rho(t): the operator attached
/// to the n-th new monomial. The built-in rule extends the action linearly
/// through the Laurent expansion of rho(t)^n, which for multiplication
/// actions is conjugation by substitution.
using ActionTransport =
    std::function<RatMatrix(int n, const CoordinateChange& rho)>;

inline ActionTransport linear_monomial_transport(const MonomialAction& action) {
  return [action](int n, const CoordinateChange& rho) {
    LaurentSeries p = laurent_power(rho.series(), n);
    RatMatrix sum = RatMatrix::zero(action.dim);
    for (int m = -action.negative_depth; m <= action.positive_bound; ++m) {
      Rational c = p.coeff(m);  // throws if the budget cannot support m
      if (c.is_zero()) continue;
      RatMatrix op = action(m);
      if (!op.is_zero()) sum = sum + op.scaled(c);
    }
    return sum;
  };
}

/// Rebuilds omega in the coordinate rho(t), pulls it back, and compares it
/// coefficientwise with the given omega on every module basis vector, within
/// the window the truncation budget supports. Exact within that window.
inline CheckReport check_differential_invariance(const EndValuedDifferential& omega,
                                                 const CoordinateChange& rho,
                                                 const MonomialAction& action,
                                                 const ActionTransport& transport) {
  CheckReport report;
  report.name = "canonical_differential";
  const int N = rho.truncation_order();
  if (N == kExactOrder)
    throw TruncationBudgetExhausted(
        "check_differential_invariance: truncate rho to a working order");
  const int P = action.positive_bound;
  const int W = N - P - 2;  // highest reliably-known Laurent degree (exclusive)
  if (W <= -P - 1)
    throw TruncationBudgetExhausted(
        "check_differential_invariance: working order too small for the module");

  // omega-tilde = sum_n A(rho^n) rho^{-n-1} rho' dt over the n that can
  // contribute below the window top
  EndValuedDifferential pulled(action.dim);
  LaurentSeries rprime{derive(rho.series())};
  for (int n = -W; n <= P; ++n) {
    RatMatrix op = transport(n, rho);
    if (op.is_zero()) continue;
    LaurentSeries factor = laurent_power(rho.series(), -n - 1) * rprime;
    pulled.add_term(n, std::move(op), std::move(factor));
  }

  for (int j = 0; j < action.dim; ++j) {
    std::vector<Rational> e(action.dim);
    e[j] = Rational(1);
    auto lhs = pulled.apply(e);
    auto rhs = omega.apply(e);
    ++report.trials;
    for (int k = 0; k < action.dim; ++k) {
      for (int d = -P - 1 - action.negative_depth; d < W; ++d) {
        Rational a = lhs[k].coeff(d);
        Rational b = rhs[k].coeff(d);
        if (a != b) {
          report.fail("basis " + std::to_string(j) + ", component " +
                      std::to_string(k) + ", degree " + std::to_string(d) +
                      ": " + a.to_string() + " vs " + b.to_string());
          return report;
        }
      }
    }
  }
  return report;
}

/// Per-slot residue of eta_j * mu_j; eta slots must have weight 1.
inline std::vector<Rational> residue_pairing(const std::vector<KDifferential>& eta,
                                             const std::vector<LaurentSeries>& mu) {
  if (eta.size() != mu.size())
    throw ValidationError("residue_pairing: slot count mismatch");
  std::vector<Rational> out;
  out.reserve(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) {
    if (eta[j].weight != Rational(1))
      throw ValidationError("residue_pairing: eta slot weight must be 1");
    out.push_back(residue(eta[j].density * mu[j]));
  }
  return out;
}

}  // namespace formaldisc
