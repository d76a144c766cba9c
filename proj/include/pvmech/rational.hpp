#pragma once

// Exact rational arithmetic used for utilities, costs and probabilities.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "pvmech/error.hpp"

namespace pvmech {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const Rational& r) {
  const BigInt den = denominator_of(r);
  if (den == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace detail {

inline BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InvalidArgument("empty integer in rational '" + std::string(whole) + "'");
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw InvalidArgument("bad digit in rational '" + std::string(whole) + "'");
  }
  // cpp_int reads a leading 0 as an octal prefix.
  const std::size_t first = std::min(text.find_first_not_of('0'), text.size() - 1);
  return BigInt(std::string(text.substr(first)));
}

inline BigInt pow10(long exponent) {
  BigInt out = 1;
  for (long k = 0; k < exponent; ++k) out *= 10;
  return out;
}

}  // namespace detail

/// Parses "p/q", an integer, or a decimal literal (optionally with an exponent)
/// into an exact rational. "0.1" is exactly 1/10.
inline Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = detail::parse_integer(text.substr(0, slash), whole);
    const BigInt den = detail::parse_integer(text.substr(slash + 1), whole);
    if (den == 0) throw InvalidArgument("zero denominator in '" + std::string(whole) + "'");
    value = Rational(num, den);
  } else {
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      text = text.substr(0, e);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      const auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
      if (ec != std::errc() || ptr != exp_text.data() + exp_text.size() || exp_text.empty() || exponent > 4000) {
        throw InvalidArgument("bad exponent in '" + std::string(whole) + "'");
      }
      if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long fraction_digits = 0;
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      digits = std::string(text.substr(0, dot)) + std::string(text.substr(dot + 1));
      fraction_digits = static_cast<long>(text.size() - dot - 1);
      if (digits.empty()) throw InvalidArgument("bad decimal '" + std::string(whole) + "'");
    } else {
      digits = std::string(text);
    }
    const BigInt mantissa = detail::parse_integer(digits, whole);
    const long scale = exponent - fraction_digits;
    value = scale >= 0 ? Rational(mantissa * detail::pow10(scale))
                       : Rational(mantissa, detail::pow10(-scale));
  }
  return negative ? Rational(-value) : value;
}

/// Exact rational for the shortest decimal that round-trips `x`
/// (so 0.3 becomes 3/10 rather than its binary expansion).
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("non-finite number where a rational was expected");
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return parse_rational(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

}  // namespace pvmech
