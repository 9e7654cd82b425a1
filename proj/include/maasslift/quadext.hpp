// Exact arithmetic in the real quadratic field Q(sqrt p).
//
// An element is stored as rat + irr*sqrt(p) with rational coordinates.
// The prime p is carried by each value; mixing different p is a usage
// error.  p = 0 is allowed as the "rational only" marker used by values
// known to lie in Q (their irr part must stay 0).
#pragma once

#include "maasslift/numbers.hpp"

namespace ml {

struct QuadExt {
  long p = 0;
  Rational rat;
  Rational irr;

  QuadExt() = default;
  explicit QuadExt(Rational r) : p(0), rat(std::move(r)) {}
  QuadExt(long p_, Rational r, Rational i)
      : p(p_), rat(std::move(r)), irr(std::move(i)) {}

  bool is_zero() const { return rat == 0 && irr == 0; }
  bool is_rational() const { return irr == 0; }
};

// Unify the field tags of two operands (either matching p, or one side
// purely rational with p = 0).
long quadext_common_field(const QuadExt& a, const QuadExt& b);

QuadExt operator+(const QuadExt& a, const QuadExt& b);
QuadExt operator-(const QuadExt& a, const QuadExt& b);
QuadExt operator-(const QuadExt& a);
// (a + b sqrt p)(c + d sqrt p) = (ac + p bd) + (ad + bc) sqrt p.
QuadExt operator*(const QuadExt& a, const QuadExt& b);
QuadExt operator*(const Rational& c, const QuadExt& a);
bool operator==(const QuadExt& a, const QuadExt& b);
bool operator!=(const QuadExt& a, const QuadExt& b);

// Multiplicative inverse: (a + b sqrt p)^{-1} = (a - b sqrt p)/(a^2 - p b^2).
QuadExt quadext_inv(const QuadExt& a);

// p^{e/2} as an element of Q(sqrt p): a rational p-power for even e,
// p^{(e-1)/2} sqrt(p) for odd e.  Works for negative e.
QuadExt sqrtp_power(long p, long e);

std::string quadext_str(const QuadExt& a);

}  // namespace ml
