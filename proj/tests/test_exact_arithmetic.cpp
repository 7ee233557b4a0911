#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "formaldisc/prng.hpp"
#include "formaldisc/rational.hpp"

using namespace formaldisc;

TEST_CASE("bigint string round-trips and arithmetic identities") {
  const char* samples[] = {"0",
                           "1",
                           "-1",
                           "4294967295",
                           "4294967296",
                           "-4294967297",
                           "999999999999999999999999999999",
                           "-123456789012345678901234567890123456789"};
  for (const char* s : samples) CHECK(BigInt::from_string(s).to_string() == s);
  CHECK(BigInt::from_string("+42") == BigInt::from_int(42));
  CHECK(BigInt::from_string("-0").to_string() == "0");
  CHECK_THROWS_AS(BigInt::from_string("12a"), std::invalid_argument);
  CHECK_THROWS_AS(BigInt::from_string(""), std::invalid_argument);

  BigInt a = BigInt::from_string("123456789012345678901234567890");
  BigInt b = BigInt::from_string("987654321098765432109876543210");
  CHECK((a + b).to_string() == "1111111110111111111011111111100");
  CHECK((b - a).to_string() == "864197532086419753208641975320");
  CHECK((a * b).to_string() ==
        "121932631137021795226185032733622923332237463801111263526900");
  CHECK(BigInt::gcd(a, b).to_string() == "9000000000900000000090");
}

TEST_CASE("bigint division against 64-bit reference and structural law") {
  for (int trial = 0; trial < 2000; ++trial) {
    Prng prng = Prng::for_trial(101, "div_small", trial);
    long long x = prng.range(-1000000000000000LL, 1000000000000000LL);
    long long y = prng.range(-2000000, 2000000);
    if (y == 0) continue;
    auto [q, r] = BigInt::divmod(BigInt::from_int(x), BigInt::from_int(y));
    CHECK(q == BigInt::from_int(x / y));
    CHECK(r == BigInt::from_int(x % y));
  }

  // wide operands: check a = q*b + r with |r| < |b| and matching signs
  for (int trial = 0; trial < 400; ++trial) {
    Prng prng = Prng::for_trial(103, "div_wide", trial);
    BigInt a = BigInt::from_int(1);
    BigInt b = BigInt::from_int(1);
    for (int limb = 0; limb < static_cast<int>(prng.range(1, 5)); ++limb)
      a = a * BigInt::from_int(prng.range(1, 0x7fffffffffffLL)) +
          BigInt::from_int(prng.range(0, 1000));
    for (int limb = 0; limb < static_cast<int>(prng.range(1, 3)); ++limb)
      b = b * BigInt::from_int(prng.range(1, 0x7fffffffffffLL)) +
          BigInt::from_int(prng.range(0, 1000));
    if (prng.range(0, 1)) a = -a;
    if (prng.range(0, 1)) b = -b;
    auto [q, r] = BigInt::divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.abs() < b.abs());
    if (!r.is_zero()) CHECK(r.is_negative() == a.is_negative());
  }

  // division edge aimed at the quotient-estimate correction path
  BigInt top = BigInt::from_string("340282366920938463463374607431768211455");  // 2^128-1
  BigInt v = BigInt::from_string("18446744073709551616");                      // 2^64
  auto [q, r] = BigInt::divmod(top, v);
  CHECK(q.to_string() == "18446744073709551615");
  CHECK(r.to_string() == "18446744073709551615");
  CHECK_THROWS_AS(BigInt::divmod(top, BigInt{}), std::domain_error);
}

TEST_CASE("rational normalization and field laws") {
  CHECK(Rational(6, -4).to_string() == "-3/2");
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0).canonical_string() == "0/1");
  CHECK(Rational(3).canonical_string() == "3/1");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK(Rational::from_string("-10/4") == Rational(-5, 2));
  CHECK(Rational::from_string("7") == Rational(7));

  for (int trial = 0; trial < 300; ++trial) {
    Prng prng = Prng::for_trial(107, "rat_laws", trial);
    Rational a(prng.range(-50, 50), prng.range(1, 30));
    Rational b(prng.range(-50, 50), prng.range(1, 30));
    Rational c(prng.range(-50, 50), prng.range(1, 30));
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(a - a == Rational(0));
  }

  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational::factorial(5) == Rational(120));
  CHECK(Rational::binomial(Rational(1, 2), 2) == Rational(-1, 8));
  CHECK(Rational::binomial(Rational(5), 2) == Rational(10));
}

TEST_CASE("gaussian rationals form a field with exact norms") {
  GaussianRational i{Rational(0), Rational(1)};
  CHECK(i * i == GaussianRational{Rational(-1)});
  GaussianRational z{Rational(3), Rational(4)};
  CHECK(z.norm() == Rational(25));
  CHECK(z / z == GaussianRational{Rational(1)});
  CHECK(z.pow(2) == GaussianRational{Rational(-7), Rational(24)});
  CHECK(z.pow(-1) * z == GaussianRational{Rational(1)});
  CHECK_THROWS_AS(z / GaussianRational{Rational(0)}, std::domain_error);

  for (int trial = 0; trial < 200; ++trial) {
    Prng prng = Prng::for_trial(109, "gauss_laws", trial);
    GaussianRational a{prng.small_rational(), prng.small_rational()};
    GaussianRational b{prng.small_rational(), prng.small_rational()};
    CHECK((a * b).norm() == a.norm() * b.norm());
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("square-root-free modulus comparisons") {
  // |u| + |v| < |w| decided on squared moduli
  auto lt = [](long long A, long long B, long long C) {
    return sum_of_moduli_less(Rational(A), Rational(B), Rational(C));
  };
  CHECK(lt(1, 1, 9));        // 1 + 1 < 3
  CHECK(!lt(1, 1, 4));       // 1 + 1 = 2, strict
  CHECK(!lt(4, 4, 9));       // 2 + 2 > 3
  CHECK(lt(0, 0, 1));
  CHECK(!lt(1, 0, 1));       // 1 + 0 = 1
  // 1 + 3/2 < 3 from squared data (1, 9/4, 9)
  CHECK(sum_of_moduli_less(Rational(1), Rational(9, 4), Rational(9)));
}
