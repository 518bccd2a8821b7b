#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cdec {

/// Library-wide error type; carries a short context string.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Exact rational scalar used everywhere outside the floating timing mode.
using Rational = mpq_class;

/// Scalar abstraction: exact rationals by default, doubles for the
/// non-acceptance floating mode.  Only the operations the engine needs.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long n) { return Rational(n); }
  static Rational from_fraction(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static std::string str(const Rational& x) { return x.get_str(); }
  static Rational parse(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw error("bad rational literal: '" + s + "'");
    r.canonicalize();
    if (sgn(r.get_den()) <= 0) throw error("bad rational literal: '" + s + "'");
    return r;
  }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long n) { return double(n); }
  static double from_fraction(long p, long q) { return double(p) / double(q); }
  // Rank decisions in floating mode use a fixed drop tolerance.
  static bool is_zero(double x) { return std::abs(x) < 1e-9; }
  static std::string str(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }
  static double parse(const std::string& s) { return std::stod(s); }
};

/// Parse "p/q" or "p" into the scalar type.
template <class S>
S parse_scalar(const std::string& s) {
  if constexpr (scalar_traits<S>::exact) {
    return scalar_traits<S>::parse(s);
  } else {
    auto slash = s.find('/');
    if (slash == std::string::npos) return scalar_traits<S>::parse(s);
    return scalar_traits<S>::parse(s.substr(0, slash)) /
           scalar_traits<S>::parse(s.substr(slash + 1));
  }
}

}  // namespace cdec
