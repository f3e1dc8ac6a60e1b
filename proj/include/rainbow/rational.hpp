#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "rainbow/errors.hpp"

namespace rainbow {

// Exact rational with 64-bit parts; enough for densities of graphs on a few
// thousand vertices.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw ParameterError("rational with zero denominator");
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                   static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("division by zero rational");
    return from128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

  // Parses "a", "a/b" or a finite decimal such as "0.45".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash != std::string::npos) {
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
      }
      auto dot = s.find('.');
      if (dot == std::string::npos) return Rational(std::stoll(s));
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      std::int64_t den = 1;
      for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
      return Rational(std::stoll(digits), den);
    } catch (const std::logic_error&) {
      throw ParameterError("cannot parse rational '" + s + "'");
    }
  }

 private:
  static Rational from128(__int128 n, __int128 d) {
    if (d < 0) n = -n, d = -d;
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) n /= a, d /= a;
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  void normalize() {
    if (den_ < 0) num_ = -num_, den_ = -den_;
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) num_ /= g, den_ /= g;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace rainbow
