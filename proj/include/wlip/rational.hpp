#ifndef WLIP_RATIONAL_HPP_
#define WLIP_RATIONAL_HPP_

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "wlip/error.hpp"

namespace wlip {

namespace detail {

using wide = __int128;

inline wide wide_abs(wide v) { return v < 0 ? -v : v; }

inline wide wide_gcd(wide a, wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow(wide v) {
  if (v > INT64_MAX || v < -INT64_MAX) {
    throw Error(Errc::arithmetic_overflow, "rational component exceeds 64 bits");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/// Exact signed rational in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t numerator) : num_(numerator), den_(1) {}  // NOLINT(implicit)
  Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw Error(Errc::invalid_argument, "zero denominator");
    assign(numerator, denominator);
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_positive() const noexcept { return num_ > 0; }
  bool is_negative() const noexcept { return num_ < 0; }
  bool is_integer() const noexcept { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(detail::wide(a.num_) * b.den_ + detail::wide(b.num_) * a.den_,
                     detail::wide(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(detail::wide(a.num_) * b.den_ - detail::wide(b.num_) * a.den_,
                     detail::wide(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(detail::wide(a.num_) * b.num_, detail::wide(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(Errc::invalid_argument, "division by zero");
    return from_wide(detail::wide(a.num_) * b.den_, detail::wide(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const detail::wide lhs = detail::wide(a.num_) * b.den_;
    const detail::wide rhs = detail::wide(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// `p` for integers, `p/q` otherwise.
  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts `p`, `-p` and `p/q`. Throws `invalid_argument` on anything else.
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }

 private:
  static Rational from_wide(detail::wide n, detail::wide d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const detail::wide g = detail::wide_gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rational r;
    r.num_ = detail::narrow(n);
    r.den_ = detail::narrow(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) {
    *this = from_wide(n, d);
  }

  static std::int64_t parse_int(std::string_view text) {
    if (text.empty()) throw Error(Errc::invalid_argument, "empty number");
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-') {
      negative = true;
      i = 1;
    }
    if (i == text.size()) throw Error(Errc::invalid_argument, "malformed number '" + std::string(text) + "'");
    detail::wide value = 0;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c < '0' || c > '9') {
        throw Error(Errc::invalid_argument, "malformed number '" + std::string(text) + "'");
      }
      value = value * 10 + (c - '0');
      if (value > INT64_MAX) throw Error(Errc::arithmetic_overflow, "number too large");
    }
    return static_cast<std::int64_t>(negative ? -value : value);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Non-negative exact rational, or +inf. Infinity absorbs addition and
/// positive scaling; comparisons are total.
class ExtValue {
 public:
  constexpr ExtValue() = default;
  ExtValue(std::int64_t v) : ExtValue(Rational(v)) {}  // NOLINT(implicit)
  ExtValue(const Rational& v) : value_(v) {             // NOLINT(implicit)
    if (v.is_negative()) throw Error(Errc::invalid_argument, "negative metric value " + v.to_string());
  }

  static ExtValue infinity() {
    ExtValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  bool is_zero() const noexcept { return !infinite_ && value_.is_zero(); }
  bool is_positive() const noexcept { return infinite_ || value_.is_positive(); }

  /// The finite value; meaningless for infinity.
  const Rational& value() const noexcept { return value_; }

  friend ExtValue operator+(const ExtValue& a, const ExtValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtValue(a.value_ + b.value_);
  }

  /// alpha * this, alpha > 0.
  ExtValue scaled(const Rational& alpha) const {
    if (!alpha.is_positive()) throw Error(Errc::nonpositive_scale, "scale factor " + alpha.to_string());
    if (infinite_) return infinity();
    return ExtValue(value_ * alpha);
  }

  friend bool operator==(const ExtValue& a, const ExtValue& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b) noexcept {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return infinite_ ? "inf" : value_.to_string(); }

  /// `p`, `p/q` or `inf`.
  static ExtValue parse(std::string_view text) {
    if (text == "inf") return infinity();
    return ExtValue(Rational::parse(text));
  }

 private:
  Rational value_;
  bool infinite_ = false;
};

inline ExtValue max(const ExtValue& a, const ExtValue& b) { return a < b ? b : a; }

}  // namespace wlip

#endif  // WLIP_RATIONAL_HPP_
