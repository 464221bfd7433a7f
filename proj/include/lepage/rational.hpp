#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "lepage/error.hpp"

namespace lepage {

/// Exact rational with 64-bit parts. Overflow throws instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return from128(-static_cast<__int128>(num_), den_); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from128(static_cast<__int128>(a.num_) + b.num_, a.den_);
    return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend int compare(const Rational& a, const Rational& b) {
    if (a == b) return 0;
    return a < b ? -1 : 1;
  }

  Rational pow(int e) const {
    Rational base = e < 0 ? Rational(1) / *this : *this;
    unsigned k = static_cast<unsigned>(e < 0 ? -e : e);
    Rational r(1);
    while (k) {
      if (k & 1u) r *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return r;
  }

  /// Exact square root when both parts are perfect squares.
  bool exact_sqrt(Rational& out) const {
    if (num_ < 0) return false;
    std::int64_t a = isqrt(num_), b = isqrt(den_);
    if (a * a != num_ || b * b != den_) return false;
    out = Rational(a, b);
    return true;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;

  static std::int64_t isqrt(std::int64_t v) {
    std::int64_t r = static_cast<std::int64_t>(__builtin_sqrt(static_cast<double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational from128(__int128 n, __int128 d) {
    if (d == 0) throw DomainError("rational division by zero");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw ExprSizeError("rational coefficient overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from128(n, d); }
};

}  // namespace lepage
