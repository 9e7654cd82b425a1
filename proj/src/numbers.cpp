#include "maasslift/numbers.hpp"

#include <algorithm>

namespace ml {

Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational pow_rat(const Rational& base, long e) {
  if (e == 0) return Rational(1);
  if (base == 0 && e < 0) throw UsageError("pow_rat: 0 to a negative power");
  Rational b = e > 0 ? base : Rational(1) / base;
  unsigned long n = static_cast<unsigned long>(e > 0 ? e : -e);
  Rational r(1);
  while (n) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  r.canonicalize();
  return r;
}

long valuation(const Int& n, const Int& p) {
  if (n == 0) throw UsageError("valuation: n = 0");
  Int m = abs(n);
  long v = 0;
  Int q, r;
  for (;;) {
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) break;
    m = q;
    ++v;
  }
  return v;
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

bool is_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int isqrt(const Int& n) {
  if (n < 0) throw UsageError("isqrt: negative argument");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

std::vector<std::pair<Int, long>> factor(const Int& n) {
  if (n == 0) throw UsageError("factor: n = 0");
  std::vector<std::pair<Int, long>> out;
  Int m = abs(n);
  auto strip = [&](const Int& p) {
    long e = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      m /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  };
  strip(2);
  strip(3);
  for (Int p = 5; p * p <= m;) {
    strip(p);
    p += 2;
    if (p * p > m) break;
    strip(p);
    p += 4;
  }
  if (m > 1) out.emplace_back(m, 1);
  return out;
}

std::vector<Int> divisors(const Int& n) {
  if (n <= 0) throw UsageError("divisors: n must be positive");
  std::vector<Int> out{Int(1)};
  for (const auto& [p, e] : factor(n)) {
    size_t sz = out.size();
    Int pe(1);
    for (long i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<size_t>(bound) + 1, true);
  for (long i = 2; i <= bound; ++i) {
    if (!sieve[static_cast<size_t>(i)]) continue;
    out.push_back(i);
    for (long j = 2 * i; j <= bound; j += i) sieve[static_cast<size_t>(j)] = false;
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw UsageError("parse_rational: empty string");
  // mpq_class(string) accepts "a/b"; validate characters first so garbage
  // input fails with a clear message instead of a GMP abort.
  size_t slash = std::string::npos;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (slash != std::string::npos || i == 0 || i + 1 == s.size())
        throw UsageError("parse_rational: malformed '" + s + "'");
      slash = i;
    } else if (c == '-' || c == '+') {
      if (i != 0 && i != slash + 1)
        throw UsageError("parse_rational: malformed '" + s + "'");
    } else if (c < '0' || c > '9') {
      throw UsageError("parse_rational: malformed '" + s + "'");
    }
  }
  Rational r;
  if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0)
    throw UsageError("parse_rational: malformed '" + s + "'");
  if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0)
    throw UsageError("parse_rational: zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rational_str(const Rational& r) {
  // Directly constructed values may not be reduced; never leak that into
  // serialized output.
  Rational canon = r;
  canon.canonicalize();
  if (canon.get_den() == 1) return canon.get_num().get_str();
  return canon.get_num().get_str() + "/" + canon.get_den().get_str();
}

}  // namespace ml
