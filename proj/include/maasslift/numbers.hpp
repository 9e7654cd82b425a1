// Exact integer / rational arithmetic helpers on top of GMP.
//
// Everything in this project is exact: Int is an arbitrary-precision
// integer, Rational an arbitrary-precision fraction in lowest terms.
// Floating point appears nowhere in the computational paths.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ml {

using Int = mpz_class;
using Rational = mpq_class;

// Error taxonomy.  The CLI maps these onto distinct exit codes:
//   UsageError/CapabilityError -> 3, MathError -> 2, anything else -> 1.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& s) : std::runtime_error(s) {}
};
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& s) : std::runtime_error(s) {}
};
// A mathematical verification failed on actual data (not a misuse of the
// API): e.g. a reconstructed polynomial does not reproduce an enumerated
// coefficient.  These are the "loud failure" cases.
struct MathError : std::runtime_error {
  explicit MathError(const std::string& s) : std::runtime_error(s) {}
};

inline long to_long(const Int& n) {
  if (!n.fits_slong_p()) throw std::overflow_error("to_long: value too large");
  return n.get_si();
}

Int pow_int(const Int& base, unsigned long e);
Rational pow_rat(const Rational& base, long e);

// p-adic valuation of n (n != 0).
long valuation(const Int& n, const Int& p);

// Kronecker symbol (a|n), the full extension of the Jacobi symbol.
int kronecker(const Int& a, const Int& n);

bool is_square(const Int& n);
Int isqrt(const Int& n);

// Trial-division factorization, smallest prime first.  Fine for the
// desk-scale operands used here (determinants, discriminants, conductors).
std::vector<std::pair<Int, long>> factor(const Int& n);

// All positive divisors of n > 0, ascending.
std::vector<Int> divisors(const Int& n);

bool is_prime(const Int& n);

// Primes p <= bound, ascending.
std::vector<long> primes_up_to(long bound);

// Parse "a/b" or "a" into a canonicalized Rational; reject malformed input.
Rational parse_rational(const std::string& s);
std::string rational_str(const Rational& r);

}  // namespace ml
