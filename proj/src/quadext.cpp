#include "maasslift/quadext.hpp"

namespace ml {

long quadext_common_field(const QuadExt& a, const QuadExt& b) {
  if (a.p == b.p) return a.p;
  if (a.p == 0 && a.irr == 0) return b.p;
  if (b.p == 0 && b.irr == 0) return a.p;
  throw UsageError("QuadExt: mixing sqrt(" + std::to_string(a.p) + ") with sqrt(" +
                   std::to_string(b.p) + ")");
}

QuadExt operator+(const QuadExt& a, const QuadExt& b) {
  return QuadExt(quadext_common_field(a, b), a.rat + b.rat, a.irr + b.irr);
}

QuadExt operator-(const QuadExt& a, const QuadExt& b) {
  return QuadExt(quadext_common_field(a, b), a.rat - b.rat, a.irr - b.irr);
}

QuadExt operator-(const QuadExt& a) { return QuadExt(a.p, -a.rat, -a.irr); }

QuadExt operator*(const QuadExt& a, const QuadExt& b) {
  long p = quadext_common_field(a, b);
  return QuadExt(p, a.rat * b.rat + Rational(p) * a.irr * b.irr,
                 a.rat * b.irr + a.irr * b.rat);
}

QuadExt operator*(const Rational& c, const QuadExt& a) {
  return QuadExt(a.p, c * a.rat, c * a.irr);
}

bool operator==(const QuadExt& a, const QuadExt& b) {
  quadext_common_field(a, b);  // reject mismatched fields
  return a.rat == b.rat && a.irr == b.irr;
}

bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }

QuadExt quadext_inv(const QuadExt& a) {
  // The norm a^2 - p b^2 vanishes only at 0 since sqrt(p) is irrational.
  Rational norm = a.rat * a.rat - Rational(a.p) * a.irr * a.irr;
  if (norm == 0) throw UsageError("quadext_inv: division by zero");
  return QuadExt(a.p, a.rat / norm, -a.irr / norm);
}

QuadExt sqrtp_power(long p, long e) {
  if (p <= 0) throw UsageError("sqrtp_power: p must be a positive prime");
  long half = (e >= 0) ? e / 2 : -((-e + 1) / 2);  // floor(e/2)
  Rational ppow = pow_rat(Rational(p), half);
  if (e % 2 == 0) return QuadExt(p, ppow, Rational(0));
  // e odd: e = 2*half + 1, so p^{e/2} = p^{half} * sqrt(p).
  return QuadExt(p, Rational(0), ppow);
}

std::string quadext_str(const QuadExt& a) {
  return rational_str(a.rat) + " + " + rational_str(a.irr) + "*sqrt(" +
         std::to_string(a.p) + ")";
}

}  // namespace ml
