#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formaldisc {

/// Arbitrary-precision signed integer, base 2^32, little-endian limbs.
/// Magnitudes stay small in practice (series coefficients), so schoolbook
/// multiplication and Knuth-style division are sufficient.
class BigInt {
public:
  BigInt() = default;
  BigInt(long long v) { *this = from_int(v); }

  static BigInt from_int(long long v) {
    BigInt r;
    if (v == 0) return r;
    r.sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? 0ULL - static_cast<unsigned long long>(v)
                                 : static_cast<unsigned long long>(v);
    while (m != 0) {
      r.mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
      m >>= 32;
    }
    return r;
  }

  static BigInt from_string(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("BigInt: empty string");
    int sign = 1;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      sign = s[0] == '-' ? -1 : 1;
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("BigInt: no digits");
    BigInt r;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9')
        throw std::invalid_argument("BigInt: bad digit in \"" + std::string(s) + "\"");
      r.mul_small_add(10, static_cast<std::uint32_t>(s[i] - '0'));
    }
    r.sign_ = r.mag_.empty() ? 0 : sign;
    return r;
  }

  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }
  int signum() const { return sign_; }

  friend BigInt operator-(const BigInt& a) {
    BigInt r = a;
    r.sign_ = -r.sign_;
    return r;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
      r.mag_ = add_mag(a.mag_, b.mag_);
      r.sign_ = a.sign_;
    } else {
      int c = cmp_mag(a.mag_, b.mag_);
      if (c == 0) return BigInt{};
      const BigInt& big = c > 0 ? a : b;
      const BigInt& small = c > 0 ? b : a;
      r.mag_ = sub_mag(big.mag_, small.mag_);
      r.sign_ = big.sign_;
    }
    return r;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return BigInt{};
    BigInt r;
    r.mag_.assign(a.mag_.size() + b.mag_.size(), 0);
    for (std::size_t i = 0; i < a.mag_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.mag_.size(); ++j) {
        std::uint64_t cur = static_cast<std::uint64_t>(a.mag_[i]) * b.mag_[j] +
                            r.mag_[i + j] + carry;
        r.mag_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.mag_[i + b.mag_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    r.sign_ = a.sign_ * b.sign_;
    return r;
  }

  // Truncated quotient (rounds toward zero), matching C semantics.
  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    return divmod(a, b).first;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    return divmod(a, b).second;
  }

  static std::pair<BigInt, BigInt> divmod(const BigInt& a, const BigInt& b) {
    if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
    if (a.sign_ == 0) return {BigInt{}, BigInt{}};
    int c = cmp_mag(a.mag_, b.mag_);
    if (c < 0) return {BigInt{}, a};
    BigInt q, r;
    divmod_mag(a.mag_, b.mag_, q.mag_, r.mag_);
    q.trim();
    r.trim();
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
    return {q, r};
  }

  BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
  BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
  BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.sign_ == b.sign_ && a.mag_ == b.mag_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }
  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    int c = cmp_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c < 0 : c > 0;
  }
  friend bool operator>(const BigInt& a, const BigInt& b) { return b < a; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return !(b < a); }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return !(a < b); }

  BigInt abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.sign_ = a.mag_.empty() ? 0 : 1;
    b.sign_ = b.mag_.empty() ? 0 : 1;
    while (!b.is_zero()) {
      BigInt r = a % b;
      a = b;
      b = r;
    }
    return a;
  }

  static BigInt pow(BigInt base, unsigned long long e) {
    BigInt r = from_int(1);
    while (e != 0) {
      if (e & 1ULL) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  /// Value as long long; throws if out of range (used for small exponents).
  long long to_int() const {
    if (mag_.size() > 2) throw std::overflow_error("BigInt: to_int overflow");
    unsigned long long m = 0;
    for (std::size_t i = mag_.size(); i-- > 0;) m = (m << 32) | mag_[i];
    if (sign_ >= 0) {
      if (m > 0x7fffffffffffffffULL) throw std::overflow_error("BigInt: to_int overflow");
      return static_cast<long long>(m);
    }
    if (m > 0x8000000000000000ULL) throw std::overflow_error("BigInt: to_int overflow");
    return -static_cast<long long>(m - 1) - 1;
  }

  std::string to_string() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> chunks;  // base 10^9, little-endian
    std::vector<std::uint32_t> cur = mag_;
    while (!cur.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = cur.size(); i-- > 0;) {
        std::uint64_t v = (rem << 32) | cur[i];
        cur[i] = static_cast<std::uint32_t>(v / 1000000000ULL);
        rem = v % 1000000000ULL;
      }
      while (!cur.empty() && cur.back() == 0) cur.pop_back();
      chunks.push_back(static_cast<std::uint32_t>(rem));
    }
    std::string s = sign_ < 0 ? "-" : "";
    s += std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
      std::string part = std::to_string(chunks[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

private:
  int sign_ = 0;
  std::vector<std::uint32_t> mag_;

  void trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
  }

  void mul_small_add(std::uint32_t m, std::uint32_t add) {
    std::uint64_t carry = add;
    for (auto& limb : mag_) {
      std::uint64_t cur = static_cast<std::uint64_t>(limb) * m + carry;
      limb = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    while (carry != 0) {
      mag_.push_back(static_cast<std::uint32_t>(carry));
      carry >>= 32;
    }
    if (!mag_.empty()) sign_ = 1;
  }

  static int cmp_mag(const std::vector<std::uint32_t>& a,
                     const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r = big;
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::uint64_t cur = static_cast<std::uint64_t>(r[i]) + carry +
                          (i < small.size() ? small[i] : 0);
      r[i] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      if (carry == 0 && i >= small.size()) break;
    }
    if (carry != 0) r.push_back(static_cast<std::uint32_t>(carry));
    return r;
  }

  // requires |a| >= |b|
  static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r = a;
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::int64_t cur = static_cast<std::int64_t>(r[i]) - borrow -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
      if (cur < 0) {
        cur += 0x100000000LL;
        borrow = 1;
      } else {
        borrow = 0;
      }
      r[i] = static_cast<std::uint32_t>(cur);
      if (borrow == 0 && i >= b.size()) break;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
  }

  // Knuth algorithm D on normalized limbs; |a| >= |b| > 0.
  static void divmod_mag(const std::vector<std::uint32_t>& a,
                         const std::vector<std::uint32_t>& b,
                         std::vector<std::uint32_t>& q,
                         std::vector<std::uint32_t>& r) {
    if (b.size() == 1) {
      q.assign(a.size(), 0);
      std::uint64_t rem = 0;
      for (std::size_t i = a.size(); i-- > 0;) {
        std::uint64_t v = (rem << 32) | a[i];
        q[i] = static_cast<std::uint32_t>(v / b[0]);
        rem = v % b[0];
      }
      r.clear();
      if (rem != 0) r.push_back(static_cast<std::uint32_t>(rem));
      return;
    }
    int shift = 0;
    for (std::uint32_t top = b.back(); (top & 0x80000000u) == 0; top <<= 1) ++shift;
    std::vector<std::uint32_t> u = shl_mag(a, shift);
    std::vector<std::uint32_t> v = shl_mag(b, shift);
    const std::size_t n = v.size();
    const std::size_t m = u.size() >= n ? u.size() - n : 0;
    u.push_back(0);
    q.assign(m + 1, 0);
    for (std::size_t j = m + 1; j-- > 0;) {
      std::uint64_t num = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
      std::uint64_t qhat = num / v[n - 1];
      std::uint64_t rhat = num % v[n - 1];
      while (qhat >= 0x100000000ULL ||
             (n >= 2 && qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2]))) {
        --qhat;
        rhat += v[n - 1];
        if (rhat >= 0x100000000ULL) break;
      }
      // multiply-subtract qhat*v from u[j..j+n]
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t p = qhat * v[i] + carry;
        carry = p >> 32;
        std::int64_t t = static_cast<std::int64_t>(u[i + j]) -
                         static_cast<std::int64_t>(p & 0xffffffffULL) - borrow;
        if (t < 0) {
          t += 0x100000000LL;
          borrow = 1;
        } else {
          borrow = 0;
        }
        u[i + j] = static_cast<std::uint32_t>(t);
      }
      std::int64_t t = static_cast<std::int64_t>(u[j + n]) -
                       static_cast<std::int64_t>(carry) - borrow;
      if (t < 0) {
        // qhat was one too large: add back
        t += 0x100000000LL;
        --qhat;
        std::uint64_t c2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t s = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
          u[i + j] = static_cast<std::uint32_t>(s);
          c2 = s >> 32;
        }
        t += static_cast<std::int64_t>(c2);
      }
      u[j + n] = static_cast<std::uint32_t>(t);
      q[j] = static_cast<std::uint32_t>(qhat);
    }
    u.resize(n);
    r = shr_mag(u, shift);
  }

  static std::vector<std::uint32_t> shl_mag(std::vector<std::uint32_t> v, int s) {
    if (s == 0) return v;
    std::uint32_t carry = 0;
    for (auto& limb : v) {
      std::uint32_t nc = limb >> (32 - s);
      limb = (limb << s) | carry;
      carry = nc;
    }
    if (carry != 0) v.push_back(carry);
    return v;
  }

  static std::vector<std::uint32_t> shr_mag(std::vector<std::uint32_t> v, int s) {
    if (s != 0) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint32_t hi = i + 1 < v.size() ? v[i + 1] : 0;
        v[i] = (v[i] >> s) | (hi << (32 - s));
      }
    }
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  }
};

}  // namespace formaldisc
