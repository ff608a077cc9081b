#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "medp/errors.hpp"

namespace medp {

/// Exact rational with arbitrary-precision numerator and denominator.
/// Always kept canonical (lowest terms, positive denominator).
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  Rational r(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  r.canonicalize();
  return r;
}

/// Formats as "p/q", including "0/1" and "3/1".
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view text) {
  Rational r;
  const std::string s(text);
  if (s.empty() || r.set_str(s, 10) != 0) {
    throw InvalidInput("malformed rational '" + s + "'");
  }
  if (r.get_den() == 0) throw InvalidInput("rational with zero denominator: " + s);
  r.canonicalize();
  return r;
}

inline mpz_class floor_of(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline mpz_class ceil_of(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw InvariantViolation("integer overflow converting " + z.get_str());
  return z.get_si();
}

inline mpz_class lcm_of(const mpz_class& a, const mpz_class& b) {
  mpz_class r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace medp
