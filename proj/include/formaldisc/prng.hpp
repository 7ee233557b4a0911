#pragma once

#include <cstdint>
#include <string_view>

#include "formaldisc/coord_change.hpp"
#include "formaldisc/series.hpp"

namespace formaldisc {

/// SplitMix64: tiny, deterministic across platforms, good enough for
/// generating small rational test data. Streams derived from (seed, label,
/// index) are reproducible regardless of execution order.
class Prng {
public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  static Prng for_trial(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the label
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
    return Prng(seed ^ h ^ (index * 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform-ish integer in [lo, hi]; bias is irrelevant for test data.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Numerator in {-2..2}, denominator in {1,2,3}. The two draws are
  /// sequenced explicitly: inside one full expression the evaluation order
  /// would be compiler-dependent, and report bytes must not be.
  Rational small_rational() {
    long long num = range(-2, 2);
    long long den = range(1, 3);
    return Rational(num, den);
  }
  Rational small_nonzero_rational() {
    Rational r = small_rational();
    while (r.is_zero()) r = small_rational();
    return r;
  }

  TruncatedSeries series(int order, int lowest_degree) {
    TruncatedSeries s(order);
    for (int d = lowest_degree; d < order; ++d) s.set(d, small_rational());
    return s;
  }

  CoordinateChange coordinate_change(int order) {
    TruncatedSeries s = series(order, 2);
    s.set(1, small_nonzero_rational());
    return CoordinateChange(s);
  }

  CoordinateChange unipotent_change(int order) {
    TruncatedSeries s = series(order, 2);
    s.set(1, Rational(1));
    return CoordinateChange(s);
  }

  /// Positive derivation: coefficient series vanishing to order >= 2.
  Derivation positive_derivation(int order) { return Derivation(series(order, 2)); }

  LaurentSeries laurent(int principal_depth, int order) {
    LaurentSeries f{series(order, 0)};
    for (int d = -principal_depth; d < 0; ++d) f.set(d, small_rational());
    return f;
  }

private:
  std::uint64_t state_;
};

}  // namespace formaldisc
