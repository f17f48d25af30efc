#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace torus_resonance {

using u128 = unsigned __int128;
using i128 = __int128;

/// A real number in [0, 1) stored as raw / 2^128.
///
/// Addition and multiplication by unsigned integers wrap modulo 2^128, which
/// is arithmetic modulo 1 with no rounding at all. Every resonance predicate
/// in the library is evaluated on these values.
class FixedFraction {
 public:
  constexpr FixedFraction() = default;
  constexpr explicit FixedFraction(u128 raw) : raw_(raw) {}
  static constexpr FixedFraction from_words(std::uint64_t hi, std::uint64_t lo) {
    return FixedFraction((u128(hi) << 64) | lo);
  }

  static constexpr FixedFraction half() { return FixedFraction(u128(1) << 127); }

  constexpr u128 raw() const { return raw_; }
  constexpr std::uint64_t hi() const { return std::uint64_t(raw_ >> 64); }
  constexpr std::uint64_t lo() const { return std::uint64_t(raw_); }

  /// Truncating conversion of the fractional part of a finite double.
  /// Returns the integer part floor(x) through `integer_part` when given.
  /// Exact for every double whose fractional part has no bits below 2^-128.
  static FixedFraction from_double(double x, std::int64_t* integer_part = nullptr) {
    double const fl = std::floor(x);
    if (integer_part) *integer_part = static_cast<std::int64_t>(fl);
    double const frac = x - fl;  // exact for |x| < 2^52
    if (frac <= 0.0) return FixedFraction();
    int exp = 0;
    double const m = std::frexp(frac, &exp);  // frac = m * 2^exp, m in [0.5, 1)
    auto const mantissa = static_cast<std::uint64_t>(std::ldexp(m, 53));
    int const shift = 75 + exp;  // 128 - 53 + exp
    if (shift >= 0) return FixedFraction(u128(mantissa) << shift);
    if (shift <= -64) return FixedFraction();
    return FixedFraction(u128(mantissa >> -shift));
  }

  /// Nearest double (error at most 2^-53 relative, 2^-129 absolute below 1/2).
  constexpr double to_double() const {
    // Split so that each half converts with a single rounding.
    return static_cast<double>(hi()) * 0x1p-64 + static_cast<double>(lo()) * 0x1p-128;
  }

  /// Equivalent of (1 - t) mod 1.
  constexpr FixedFraction negated() const { return FixedFraction(u128(0) - raw_); }

  /// Distance to the nearest integer as an exact fixed-point value in [0, 1/2].
  constexpr FixedFraction nearest_int_distance() const {
    u128 const neg = u128(0) - raw_;
    return FixedFraction(raw_ < neg ? raw_ : neg);
  }

  constexpr FixedFraction& operator+=(FixedFraction o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr FixedFraction& operator-=(FixedFraction o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr FixedFraction operator+(FixedFraction l, FixedFraction r) { return l += r; }
  friend constexpr FixedFraction operator-(FixedFraction l, FixedFraction r) { return l -= r; }

  /// n * t mod 1.
  friend constexpr FixedFraction operator*(std::uint64_t n, FixedFraction t) {
    return FixedFraction(u128(n) * t.raw_);
  }

  friend constexpr bool operator==(FixedFraction, FixedFraction) = default;
  friend constexpr auto operator<=>(FixedFraction l, FixedFraction r) {
    return l.raw_ <=> r.raw_;
  }

  /// "0x" followed by exactly 32 lowercase hex digits.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = "0x";
    out.resize(34);
    for (int i = 0; i < 32; ++i) {
      out[33 - i] = digits[(raw_ >> (4 * i)) & 0xf];
    }
    return out;
  }

  /// Parses "0x" + 1..32 hex digits. Returns nullopt on malformed input.
  static std::optional<FixedFraction> from_hex(std::string_view s) {
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return std::nullopt;
    s.remove_prefix(2);
    if (s.size() > 32) return std::nullopt;
    u128 raw = 0;
    for (char ch : s) {
      int d = 0;
      if (ch >= '0' && ch <= '9') d = ch - '0';
      else if (ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
      else if (ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
      else return std::nullopt;
      raw = (raw << 4) | u128(d);
    }
    return FixedFraction(raw);
  }

 private:
  u128 raw_ = 0;
};

/// Exact product n * t split into integer carry and fractional part:
/// n * t = carry + frac. The carry is below n, so it fits in 64 bits.
struct ScaledFraction {
  std::uint64_t carry = 0;
  FixedFraction frac;
};

constexpr ScaledFraction multiply(std::uint64_t n, FixedFraction t) {
  u128 const lo = u128(n) * t.lo();
  u128 const hi = u128(n) * t.hi();
  // n * raw = hi * 2^64 + lo, a 192-bit value; keep the top 64 bits as carry.
  u128 const mid = (hi & ~std::uint64_t(0)) + (lo >> 64);
  std::uint64_t const carry = std::uint64_t(hi >> 64) + std::uint64_t(mid >> 64);
  u128 const frac = (mid << 64) | std::uint64_t(lo);
  return {carry, FixedFraction(frac)};
}

/// ‖t‖, the distance from t to the nearest integer, in [0, 1/2].
constexpr double nearest_int_dist(FixedFraction t) {
  return t.nearest_int_distance().to_double();
}

}  // namespace torus_resonance
