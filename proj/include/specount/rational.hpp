#pragma once

// Exact arithmetic primitives shared by the whole library.
//
// Rational coefficients and big-integer counts are backed by GMP's C++
// bindings.  mpq_class keeps values in lowest terms with positive
// denominator as long as every value entering arithmetic is canonical,
// so construction goes through the helpers below.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specount {

using Rational = mpq_class;
using Integer = mpz_class;

// Raised when a computed quantity violates a structural guarantee
// (non-integer count, negative count, unstable fixed point).  Any such
// failure means a bug upstream, not bad user input.
class integrity_error : public std::runtime_error {
public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

inline Rational rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Euler's totient by trial division; inputs here are tiny (cycle lengths).
inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

// True iff q is an integer; value returned through out.
inline bool rational_to_integer(const Rational& q, Integer& out) {
  if (q.get_den() != 1) return false;
  out = q.get_num();
  return true;
}

}  // namespace specount
