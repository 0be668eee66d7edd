#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tasp {

/// Exact rational number with a single point at +infinity.
///
/// Values are kept normalized (gcd 1, positive denominator); infinity is
/// encoded as 1/0. All arithmetic goes through 128-bit intermediates and
/// throws std::overflow_error if a normalized result leaves the 64-bit
/// range. Infinity absorbs: inf + x = inf, inf * x = inf (including x = 0,
/// which is the saturating convention the admissibility checks rely on).
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long n) : num_(n) {}  // implicit: integers are rationals
  Rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  static constexpr Rational infinity() {
    Rational r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  constexpr bool is_infinite() const { return den_ == 0; }
  constexpr bool is_integer() const { return den_ == 1; }
  constexpr long long num() const { return num_; }
  constexpr long long den() const { return den_; }

  double to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    Rational r;
    r.assign(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
             i128(a.den_) * b.den_);
    return r;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  /// Finite subtraction only; infinity on the left absorbs as in addition.
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (b.is_infinite()) throw std::domain_error("rational: subtracting infinity");
    if (a.is_infinite()) return infinity();
    Rational r;
    r.assign(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
             i128(a.den_) * b.den_);
    return r;
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    Rational r;
    r.assign(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    return r;
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (a.is_infinite() && b.is_infinite())
      throw std::domain_error("rational: inf / inf");
    if (b.is_infinite()) return Rational(0);
    if (b.num_ == 0) throw std::domain_error("rational: division by zero");
    if (a.is_infinite()) return infinity();
    Rational r;
    r.assign(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    return r;
  }

  /// Three-way comparison; infinity compares greater than every finite value.
  friend int cmp(const Rational& a, const Rational& b) {
    if (a.is_infinite() && b.is_infinite()) return 0;
    if (a.is_infinite()) return 1;
    if (b.is_infinite()) return -1;
    const __int128 lhs = i128(a.num_) * b.den_;
    const __int128 rhs = i128(b.num_) * a.den_;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

  /// "p/q" for non-integers, plain integer otherwise, "inf" at infinity.
  std::string str() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

  /// Accepts "inf", "p/q", plain integers, and finite decimals ("1.5").
  static Rational parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("rational: empty string");
    if (text == "inf") return infinity();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      const long long p = parse_int(text.substr(0, slash));
      const long long q = parse_int(text.substr(slash + 1));
      return Rational(p, q);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (frac.empty()) throw std::invalid_argument("rational: bad decimal");
      bool neg = !whole.empty() && whole.front() == '-';
      if (neg) whole.remove_prefix(1);
      __int128 num = whole.empty() ? 0 : parse_int(whole);
      __int128 den = 1;
      for (char c : frac) {
        if (c < '0' || c > '9') throw std::invalid_argument("rational: bad decimal");
        num = num * 10 + (c - '0');
        den *= 10;
        if (den > i128(1000000000000000000LL))
          throw std::overflow_error("rational: decimal too long");
      }
      Rational r;
      r.assign(neg ? -num : num, den);
      return r;
    }
    return Rational(parse_int(text));
  }

 private:
  static constexpr __int128 i128(long long v) { return static_cast<__int128>(v); }

  static long long parse_int(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("rational: bad integer");
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("rational: bad integer");
    __int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("rational: bad integer");
      v = v * 10 + (s[i] - '0');
      if (v > i128(INT64_MAX)) throw std::overflow_error("rational: integer overflow");
    }
    long long mag = static_cast<long long>(v);
    return s[0] == '-' ? -mag : mag;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(__int128 num, __int128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    const __int128 g = gcd128(num, den);
    num /= g;
    den /= g;
    if (num > i128(INT64_MAX) || num < -i128(INT64_MAX) || den > i128(INT64_MAX))
      throw std::overflow_error("rational: overflow");
    num_ = static_cast<long long>(num);
    den_ = static_cast<long long>(den);
  }

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace tasp
