#pragma once

// Conversion of textual real numbers to SplitReal without passing through a
// double. Accepted forms:
//   decimal     "-0.125", "3", "1.5e-3"
//   rational    "1/3", "-7/1000"
//   square root "sqrt:N", optionally offset by an integer: "sqrt:2-1"
//   fixed point "fp:0x<up to 32 hex digits>", optionally "<int>+fp:0x..."

#include <cctype>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "torus_resonance/errors.hpp"
#include "torus_resonance/params.hpp"

namespace torus_resonance {

namespace detail {

using boost::multiprecision::cpp_int;

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

// Base-10 digits only; leading zeros would otherwise select octal.
inline cpp_int decimal_int(std::string_view digits) {
  auto const first = digits.find_first_not_of('0');
  return first == std::string_view::npos ? cpp_int(0) : cpp_int(std::string(digits.substr(first)));
}

// Floor-splits num / 2^128 (num any sign) into a SplitReal.
inline SplitReal split_scaled(cpp_int const& scaled) {
  cpp_int const one = cpp_int(1) << 128;
  cpp_int integer = scaled >> 128;  // arithmetic shift floors for cpp_int
  cpp_int frac = scaled - (integer << 128);
  if (frac < 0) {
    frac += one;
    integer -= 1;
  }
  if (integer > std::numeric_limits<std::int64_t>::max() ||
      integer < std::numeric_limits<std::int64_t>::min()) {
    throw RangeError("integer part does not fit in 64 bits");
  }
  auto const lo = static_cast<std::uint64_t>(frac & cpp_int(~std::uint64_t(0)));
  auto const hi = static_cast<std::uint64_t>(frac >> 64);
  return {static_cast<std::int64_t>(integer), FixedFraction::from_words(hi, lo)};
}

// floor(num * 2^128 / den) for den > 0.
inline cpp_int floor_scaled(cpp_int const& num, cpp_int const& den) {
  cpp_int const n = num << 128;
  cpp_int q = n / den;  // truncates toward zero
  if (n < 0 && q * den != n) q -= 1;
  return q;
}

inline std::optional<SplitReal> parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s.remove_prefix(1);
  }
  std::int64_t exponent = 0;
  if (auto const e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part[0] == '-' || exp_part[0] == '+')) {
      exp_negative = exp_part[0] == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 4) return std::nullopt;
    exponent = std::stoll(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto const dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;

  std::string digits(int_part);
  digits += frac_part;
  cpp_int num = decimal_int(digits);
  if (negative) num = -num;
  exponent -= static_cast<std::int64_t>(frac_part.size());
  cpp_int den = 1;
  if (exponent >= 0) {
    if (exponent > 40) throw RangeError("decimal exponent too large");
    num *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(exponent));
  } else {
    den = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(-exponent));
  }
  return split_scaled(floor_scaled(num, den));
}

inline std::optional<SplitReal> parse_sqrt(std::string_view s) {
  std::int64_t offset = 0;
  if (auto const sign = s.find_first_of("+-"); sign != std::string_view::npos) {
    std::string_view tail = s.substr(sign + 1);
    if (!all_digits(tail) || tail.size() > 18) return std::nullopt;
    offset = std::stoll(std::string(tail));
    if (s[sign] == '-') offset = -offset;
    s = s.substr(0, sign);
  }
  if (!all_digits(s) || s.size() > 38) return std::nullopt;
  cpp_int const n = decimal_int(s);
  cpp_int const scaled = n << 256;
  SplitReal r = split_scaled(boost::multiprecision::sqrt(scaled));
  r.integer += offset;
  return r;
}

inline std::optional<SplitReal> parse_rational(std::string_view num, std::string_view den) {
  bool negative = false;
  if (!num.empty() && (num[0] == '-' || num[0] == '+')) {
    negative = num[0] == '-';
    num.remove_prefix(1);
  }
  if (!all_digits(num) || !all_digits(den) || num.size() > 38 || den.size() > 38) return std::nullopt;
  cpp_int n = decimal_int(num);
  cpp_int const d = decimal_int(den);
  if (d == 0) return std::nullopt;
  if (negative) n = -n;
  return split_scaled(floor_scaled(n, d));
}

}  // namespace detail

/// Parses one of the accepted real forms. Returns nullopt on malformed input;
/// throws RangeError when the integer part exceeds 64 bits.
inline std::optional<SplitReal> parse_real(std::string_view text) {
  if (text.starts_with("sqrt:")) return detail::parse_sqrt(text.substr(5));
  if (auto const slash = text.find('/'); slash != std::string_view::npos) {
    return detail::parse_rational(text.substr(0, slash), text.substr(slash + 1));
  }
  std::int64_t integer = 0;
  std::string_view rest = text;
  if (auto const pos = text.find("fp:"); pos != std::string_view::npos) {
    if (pos > 0) {
      if (text[pos - 1] != '+') return std::nullopt;
      std::string_view head = text.substr(0, pos - 1);
      bool negative = false;
      if (!head.empty() && head[0] == '-') {
        negative = true;
        head.remove_prefix(1);
      }
      if (!detail::all_digits(head) || head.size() > 18) return std::nullopt;
      integer = std::stoll(std::string(head));
      if (negative) integer = -integer;
    }
    rest = text.substr(pos + 3);
    auto const frac = FixedFraction::from_hex(rest);
    if (!frac) return std::nullopt;
    return SplitReal{integer, *frac};
  }
  return detail::parse_decimal(text);
}

/// Canonical exact text form, accepted back by parse_real.
inline std::string format_real(SplitReal const& r) {
  std::string out;
  if (r.integer != 0) out = std::to_string(r.integer) + "+";
  return out + "fp:" + r.frac.to_hex();
}

}  // namespace torus_resonance
