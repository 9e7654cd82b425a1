// Laurent polynomials in one variable X with coefficients in Q(sqrt p).
//
// These carry the normalized local polynomials and the l/lambda bases:
// symmetric supports like X^f + ... + X^{-f} are the natural habitat, so
// exponents may be negative.  Zero coefficients are never stored.
#pragma once

#include "maasslift/quadext.hpp"

#include <map>

namespace ml {

struct LaurentPolyQuad {
  long p = 0;                      // field tag of the coefficients
  std::map<long, QuadExt> terms;   // exponent -> nonzero coefficient

  LaurentPolyQuad() = default;
  explicit LaurentPolyQuad(long p_) : p(p_) {}

  bool is_zero() const { return terms.empty(); }
  // Exponent range of the support; requires a nonzero polynomial.
  long min_exp() const;
  long max_exp() const;
  QuadExt coeff(long e) const;
  void set_coeff(long e, const QuadExt& c);
};

LaurentPolyQuad laurent_zero(long p);
LaurentPolyQuad laurent_const(long p, const QuadExt& c);
LaurentPolyQuad laurent_monomial(long p, long e, const QuadExt& c);

LaurentPolyQuad operator+(const LaurentPolyQuad& a, const LaurentPolyQuad& b);
LaurentPolyQuad operator-(const LaurentPolyQuad& a, const LaurentPolyQuad& b);
LaurentPolyQuad operator*(const LaurentPolyQuad& a, const LaurentPolyQuad& b);
LaurentPolyQuad operator*(const QuadExt& c, const LaurentPolyQuad& a);
bool operator==(const LaurentPolyQuad& a, const LaurentPolyQuad& b);

// Substitute X -> X^{-1}.
LaurentPolyQuad invert_variable(const LaurentPolyQuad& a);

// Evaluate at an invertible x in Q(sqrt p).
QuadExt laurent_eval(const LaurentPolyQuad& a, const QuadExt& x);

// For P with P(X) = P(X^{-1}): the unique Q with Q(X + X^{-1}) = P(X),
// returned as coefficients of Y^0..Y^deg.  Asymmetric input is a usage
// error.  Exact and invertible on symmetric inputs.
std::vector<QuadExt> symmetric_to_Y(const LaurentPolyQuad& P);

std::string laurent_str(const LaurentPolyQuad& a);

}  // namespace ml
