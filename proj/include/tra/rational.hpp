#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tra {

// Exact rational arithmetic for cost values. Cost comparisons drive
// satisfaction flags and equilibrium tests, and ties are common, so they
// must not depend on floating-point rounding. Magnitudes stay far below
// 64 bits for the instance sizes this project targets (|N| <= 24).
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long value) : num_(value), den_(1) {}
  Rational(long long num, long long den) { assign(num, den); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  Rational& operator+=(const Rational& o) {
    assign_wide(static_cast<__int128>(num_) * o.den_ +
                    static_cast<__int128>(o.num_) * den_,
                static_cast<__int128>(den_) * o.den_);
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }

  Rational& operator-=(const Rational& o) {
    assign_wide(static_cast<__int128>(num_) * o.den_ -
                    static_cast<__int128>(o.num_) * den_,
                static_cast<__int128>(den_) * o.den_);
    return *this;
  }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }

  Rational& operator*=(const Rational& o) {
    assign_wide(static_cast<__int128>(num_) * o.num_,
                static_cast<__int128>(den_) * o.den_);
    return *this;
  }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }

  Rational& operator/=(const Rational& o) {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    assign_wide(static_cast<__int128>(num_) * o.den_,
                static_cast<__int128>(den_) * o.num_);
    return *this;
  }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // (value - 1) * 100 rounded half-away-from-zero to an integer percent.
  long long percent_change() const {
    const __int128 num100 = (static_cast<__int128>(num_) - den_) * 100;
    const __int128 d = den_;
    __int128 a = num100 < 0 ? -num100 : num100;
    __int128 q = a / d;
    if (2 * (a % d) >= d) ++q;
    return static_cast<long long>(num100 < 0 ? -q : q);
  }

 private:
  void assign(long long n, long long d) {
    assign_wide(static_cast<__int128>(n), static_cast<__int128>(d));
  }

  void assign_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const unsigned long long g = gcd_wide(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= static_cast<__int128>(g);
      d /= static_cast<__int128>(g);
    }
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax)
      throw std::overflow_error("Rational: value out of 64-bit range");
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
  }

  static unsigned long long gcd_wide(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return static_cast<unsigned long long>(a);
  }

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace tra
