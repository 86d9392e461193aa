#pragma once

// Exact rational numbers over 128-bit integers.
//
// Every arithmetic operation is overflow checked and throws
// std::overflow_error instead of wrapping. Values are always kept in lowest
// terms with a positive denominator.

#include <cmath>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace ratebound {

using Int128 = __int128;
using UInt128 = unsigned __int128;

namespace detail {

inline UInt128 gcd_u128(UInt128 a, UInt128 b) {
  while (b != 0) {
    UInt128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline UInt128 checked_mul(UInt128 a, UInt128 b) {
  UInt128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("128-bit multiplication overflow");
  return r;
}

inline UInt128 checked_add(UInt128 a, UInt128 b) {
  UInt128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("128-bit addition overflow");
  return r;
}

inline Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("128-bit multiplication overflow");
  return r;
}

inline Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("128-bit addition overflow");
  return r;
}

inline UInt128 lcm_u128(UInt128 a, UInt128 b) { return checked_mul(a / gcd_u128(a, b), b); }

// Full 256-bit product of two unsigned 128-bit values, as (high, low).
struct Wide {
  UInt128 hi;
  UInt128 lo;
  friend auto operator<=>(const Wide&, const Wide&) = default;
};

inline Wide wide_mul(UInt128 a, UInt128 b) {
  const UInt128 mask = (UInt128{1} << 64) - 1;
  UInt128 a0 = a & mask, a1 = a >> 64;
  UInt128 b0 = b & mask, b1 = b >> 64;
  UInt128 p00 = a0 * b0, p01 = a0 * b1, p10 = a1 * b0, p11 = a1 * b1;
  UInt128 mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
  UInt128 lo = (p00 & mask) | (mid << 64);
  UInt128 hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
  return {hi, lo};
}

inline std::string u128_to_string(UInt128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {s.rbegin(), s.rend()};
}

inline UInt128 abs_u128(Int128 v) { return v < 0 ? UInt128(0) - UInt128(v) : UInt128(v); }

inline long double log2_u128(UInt128 v) { return std::log2(static_cast<long double>(v)); }

}  // namespace detail

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int128 num, Int128 den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  /// Parses "num/den" or a bare integer. Whitespace is not accepted.
  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

  Int128 num() const { return num_; }
  Int128 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const { return static_cast<double>(to_long_double()); }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// "num/den"; integers keep the "/1" so the format is uniform in reports.
  std::string str() const {
    std::string s = num_ < 0 ? "-" : "";
    return s + detail::u128_to_string(detail::abs_u128(num_)) + "/" +
           detail::u128_to_string(static_cast<UInt128>(den_));
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Int128 g = static_cast<Int128>(detail::gcd_u128(static_cast<UInt128>(a.den_), static_cast<UInt128>(b.den_)));
    Int128 da = a.den_ / g;
    Int128 db = b.den_ / g;
    Int128 n = detail::checked_add(detail::checked_mul(a.num_, db), detail::checked_mul(b.num_, da));
    return Rational(n, detail::checked_mul(a.den_, db));
  }
  friend Rational operator-(const Rational& a) {
    Rational r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first to keep intermediates small.
    Int128 g1 = static_cast<Int128>(detail::gcd_u128(detail::abs_u128(a.num_), static_cast<UInt128>(b.den_)));
    Int128 g2 = static_cast<Int128>(detail::gcd_u128(detail::abs_u128(b.num_), static_cast<UInt128>(a.den_)));
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return Rational(detail::checked_mul(a.num_ / g1, b.num_ / g2), detail::checked_mul(a.den_ / g2, b.den_ / g1));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    Rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
    return a * inv;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const bool an = a.num_ < 0, bn = b.num_ < 0;
    if (an != bn) return an ? std::strong_ordering::less : std::strong_ordering::greater;
    auto lhs = detail::wide_mul(detail::abs_u128(a.num_), static_cast<UInt128>(b.den_));
    auto rhs = detail::wide_mul(detail::abs_u128(b.num_), static_cast<UInt128>(a.den_));
    return an ? rhs <=> lhs : lhs <=> rhs;
  }

 private:
  static Int128 parse_int(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer in rational");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
    Int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
      v = detail::checked_add(detail::checked_mul(v, Int128{10}), Int128{s[i] - '0'});
    }
    return neg ? -v : v;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    UInt128 g = detail::gcd_u128(detail::abs_u128(num_), static_cast<UInt128>(den_));
    if (g > 1) {
      num_ /= static_cast<Int128>(g);
      den_ /= static_cast<Int128>(g);
    }
    if (num_ == 0) den_ = 1;
  }

  Int128 num_ = 0;
  Int128 den_ = 1;
};

}  // namespace ratebound
