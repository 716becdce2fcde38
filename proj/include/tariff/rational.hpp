#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tariff {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Bad input data or a violated model invariant. CLI maps this to exit 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A size guard refused the computation. CLI maps this to exit 3.
class GuardError : public std::runtime_error {
 public:
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Strict base-10 integer: optional sign then digits. Leading zeros are
// stripped before handing to cpp_int, whose string constructor would read
// them as an octal prefix.
inline Integer parse_integer_strict(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) throw ValidationError("invalid integer literal: '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw ValidationError("invalid integer literal: '" + std::string(text) + "'");
  while (i + 1 < text.size() && text[i] == '0') ++i;
  Integer value{std::string(text.substr(i))};
  return negative ? Integer(-value) : value;
}

}  // namespace detail

// Parses "123", "-7" or "p/q". The denominator must be a positive integer.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(detail::parse_integer_strict(text));
  const Integer num = detail::parse_integer_strict(text.substr(0, slash));
  const Integer den = detail::parse_integer_strict(text.substr(slash + 1));
  if (den <= 0)
    throw ValidationError("rational '" + std::string(text) + "' has a non-positive denominator");
  return Rational(num, den);
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Fixed-point decimal rendering for human output, done in integer arithmetic
// (round half away from zero). The rational string is the authoritative form.
inline std::string to_decimal_string(const Rational& r, unsigned places = 6) {
  Integer num = numerator(r);
  const Integer den = denominator(r);
  const bool negative = num < 0;
  if (negative) num = -num;
  Integer scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  const Integer scaled = (num * scale * 2 + den) / (den * 2);
  Integer whole = scaled / scale;
  Integer frac = scaled % scale;
  std::string frac_str = frac.str();
  if (frac_str.size() < places) frac_str.insert(0, places - frac_str.size(), '0');
  std::string out = whole.str();
  if (places > 0) out += "." + frac_str;
  if (negative && (whole != 0 || frac != 0)) out.insert(0, "-");
  return out;
}

inline Rational pow_rational(const Rational& base, long long exponent) {
  if (exponent < 0) {
    if (base == 0) throw ValidationError("zero base with negative exponent");
    return pow_rational(Rational(denominator(base), numerator(base)), -exponent);
  }
  Rational acc = 1;
  Rational b = base;
  unsigned long long e = static_cast<unsigned long long>(exponent);
  while (e != 0) {
    if (e & 1ULL) acc *= b;
    b *= b;
    e >>= 1ULL;
  }
  return acc;
}

}  // namespace tariff
