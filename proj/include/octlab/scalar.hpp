#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace octlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Coefficient-field abstraction. The whole library is templated on the
/// scalar type: `Rational` gives exact arithmetic (identity checks),
/// `double` gives floating point (performance runs). Modes are never
/// mixed within one computation.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;

  static const char* mode_name() { return "exact"; }

  static Rational from_int(long long v) { return Rational(v); }

  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

  static std::string format(const Rational& v) {
    const BigInt num = boost::multiprecision::numerator(v);
    const BigInt den = boost::multiprecision::denominator(v);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }

  // Accepts "p" or "p/q"; normalizes to canonical reduced form.
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s));
      const BigInt num(s.substr(0, slash));
      const BigInt den(s.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      return Rational(num, den);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a rational: '" + s + "'");
    }
  }

  // Strict file-format variant: the textual form must already be canonical
  // (reduced, positive denominator, "/1" never written).
  static Rational parse_canonical(const std::string& s) {
    const Rational v = parse(s);
    if (format(v) != s)
      throw std::invalid_argument("rational not in canonical reduced form: '" + s + "'");
    return v;
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;

  static const char* mode_name() { return "float"; }

  static double from_int(long long v) { return static_cast<double>(v); }

  static double abs(double v) { return v < 0 ? -v : v; }

  // 17 significant digits round-trips every finite double.
  static std::string format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  static double parse(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      throw std::invalid_argument("not a float: '" + s + "'");
    return v;
  }

  static double parse_canonical(const std::string& s) { return parse(s); }
};

template <class S>
S scalar_pow(const S& base, int exp) {
  S r = ScalarTraits<S>::from_int(1);
  for (int i = 0; i < exp; ++i) r = r * base;
  return r;
}

}  // namespace octlab
