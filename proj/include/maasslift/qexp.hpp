// Truncated q-expansions with exact rational coefficients.
//
// A QExpansion stores the coefficients of q^0 .. q^{prec-1}.  Arithmetic
// truncates to the shorter precision; all operations are exact.  Products
// use plain quadratic convolution, with an integer fast path since the
// generators used here all have integral coefficients.
#pragma once

#include "maasslift/numbers.hpp"

namespace ml {

struct QExpansion {
  long prec = 0;                // number of known coefficients
  std::vector<Rational> c;      // c[m] = coefficient of q^m, size prec

  QExpansion() = default;
  explicit QExpansion(long precision)
      : prec(precision), c(static_cast<size_t>(precision), Rational(0)) {
    if (precision <= 0) throw UsageError("QExpansion: precision must be positive");
  }

  const Rational& coeff(long m) const {
    if (m < 0 || m >= prec) throw UsageError("QExpansion: coefficient index out of range");
    return c[static_cast<size_t>(m)];
  }
  Rational& coeff(long m) {
    if (m < 0 || m >= prec) throw UsageError("QExpansion: coefficient index out of range");
    return c[static_cast<size_t>(m)];
  }
  bool is_zero() const;
};

QExpansion operator+(const QExpansion& a, const QExpansion& b);
QExpansion operator-(const QExpansion& a, const QExpansion& b);
QExpansion operator*(const QExpansion& a, const QExpansion& b);
QExpansion operator*(const Rational& s, const QExpansion& a);
// Equality on the common precision.
bool agree(const QExpansion& a, const QExpansion& b);

QExpansion qexp_pow(const QExpansion& a, long e);

// Exact division by a constant; throws MathError if any coefficient fails
// to stay integral when integral=true is requested by the caller.
QExpansion qexp_div_exact(const QExpansion& a, const Int& d);

}  // namespace ml
