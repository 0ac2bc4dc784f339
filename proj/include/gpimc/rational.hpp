#pragma once

#include <gmpxx.h>

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gpimc {

using Integer = mpz_class;

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator). GMP keeps arithmetic results canonical as long as every
/// value is built through the helpers below.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

/// Parses "num/den" or "num" (optional sign, decimal digits).
inline Rational parse_rational(std::string_view text) {
  Rational r;
  if (text.empty() || mpq_set_str(r.get_mpq_t(), std::string(text).c_str(), 10) != 0)
    throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
  if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0)
    throw std::invalid_argument("rational: zero denominator in '" + std::string(text) + "'");
  r.canonicalize();
  return r;
}

/// Canonical exact rendering: "num/den", or just "num" when den == 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Float rendering used by the output layer: 17 significant digits.
inline std::string to_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", r.get_d());
  return buf;
}

inline int sign(const Rational& r) { return sgn(r); }

inline Rational pow_ui(const Rational& base, unsigned long exp) {
  Rational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), exp);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), exp);
  return r;  // powers of a canonical fraction are canonical
}

inline Integer pow_ui(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Rational abs(const Rational& r) { return ::abs(r); }

}  // namespace gpimc
