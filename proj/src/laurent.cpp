#include "maasslift/laurent.hpp"

namespace ml {

long LaurentPolyQuad::min_exp() const {
  if (terms.empty()) throw UsageError("min_exp of zero polynomial");
  return terms.begin()->first;
}

long LaurentPolyQuad::max_exp() const {
  if (terms.empty()) throw UsageError("max_exp of zero polynomial");
  return terms.rbegin()->first;
}

QuadExt LaurentPolyQuad::coeff(long e) const {
  auto it = terms.find(e);
  if (it == terms.end()) return QuadExt(p, Rational(0), Rational(0));
  return it->second;
}

void LaurentPolyQuad::set_coeff(long e, const QuadExt& c) {
  if (c.is_zero())
    terms.erase(e);
  else
    terms[e] = QuadExt(p, c.rat, c.irr);
}

LaurentPolyQuad laurent_zero(long p) { return LaurentPolyQuad(p); }

LaurentPolyQuad laurent_const(long p, const QuadExt& c) {
  LaurentPolyQuad r(p);
  r.set_coeff(0, c);
  return r;
}

LaurentPolyQuad laurent_monomial(long p, long e, const QuadExt& c) {
  LaurentPolyQuad r(p);
  r.set_coeff(e, c);
  return r;
}

static bool purely_rational(const LaurentPolyQuad& a) {
  for (const auto& [e, c] : a.terms) {
    (void)e;
    if (c.irr != 0) return false;
  }
  return true;
}

// A polynomial with rational coefficients embeds in any Q(sqrt p), so a
// p = 0 side only clashes when it genuinely uses its own irrationality.
static long common_field(const LaurentPolyQuad& a, const LaurentPolyQuad& b) {
  if (a.p == b.p) return a.p;
  if (a.p == 0 && purely_rational(a)) return b.p;
  if (b.p == 0 && purely_rational(b)) return a.p;
  throw UsageError("LaurentPolyQuad: mixed coefficient fields");
}

LaurentPolyQuad operator+(const LaurentPolyQuad& a, const LaurentPolyQuad& b) {
  LaurentPolyQuad r(common_field(a, b));
  r.terms = a.terms;
  for (const auto& [e, c] : b.terms) {
    QuadExt s = r.coeff(e) + c;
    r.set_coeff(e, s);
  }
  return r;
}

LaurentPolyQuad operator-(const LaurentPolyQuad& a, const LaurentPolyQuad& b) {
  LaurentPolyQuad r(common_field(a, b));
  r.terms = a.terms;
  for (const auto& [e, c] : b.terms) {
    QuadExt s = r.coeff(e) - c;
    r.set_coeff(e, s);
  }
  return r;
}

LaurentPolyQuad operator*(const LaurentPolyQuad& a, const LaurentPolyQuad& b) {
  LaurentPolyQuad r(common_field(a, b));
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      QuadExt s = r.coeff(ea + eb) + ca * cb;
      r.set_coeff(ea + eb, s);
    }
  return r;
}

LaurentPolyQuad operator*(const QuadExt& c, const LaurentPolyQuad& a) {
  LaurentPolyQuad r(a.p == 0 ? c.p : a.p);
  for (const auto& [e, ca] : a.terms) r.set_coeff(e, c * ca);
  return r;
}

bool operator==(const LaurentPolyQuad& a, const LaurentPolyQuad& b) {
  common_field(a, b);
  return a.terms == b.terms;
}

LaurentPolyQuad invert_variable(const LaurentPolyQuad& a) {
  LaurentPolyQuad r(a.p);
  for (const auto& [e, c] : a.terms) r.set_coeff(-e, c);
  return r;
}

QuadExt laurent_eval(const LaurentPolyQuad& a, const QuadExt& x) {
  QuadExt acc(a.p, Rational(0), Rational(0));
  QuadExt xinv;  // computed lazily, only when negative exponents occur
  bool have_inv = false;
  for (const auto& [e, c] : a.terms) {
    QuadExt pw(a.p, Rational(1), Rational(0));
    if (e >= 0) {
      for (long i = 0; i < e; ++i) pw = pw * x;
    } else {
      if (!have_inv) {
        xinv = quadext_inv(x);
        have_inv = true;
      }
      for (long i = 0; i < -e; ++i) pw = pw * xinv;
    }
    acc = acc + c * pw;
  }
  return acc;
}

std::vector<QuadExt> symmetric_to_Y(const LaurentPolyQuad& P) {
  if (P != invert_variable(P)) throw UsageError("symmetric_to_Y: input not symmetric");
  if (P.is_zero()) return {};
  LaurentPolyQuad rem = P;
  long deg = P.max_exp();
  if (deg < 0) throw UsageError("symmetric_to_Y: input not symmetric");
  std::vector<QuadExt> out(static_cast<size_t>(deg) + 1, QuadExt(Rational(0)));
  // Peel from the top: (X + X^{-1})^e = X^e + lower symmetric terms.
  LaurentPolyQuad Y = laurent_monomial(P.p, 1, QuadExt(Rational(1))) +
                     laurent_monomial(P.p, -1, QuadExt(Rational(1)));
  while (!rem.is_zero() && rem.max_exp() > 0) {
    long e = rem.max_exp();
    QuadExt c = rem.coeff(e);
    out[static_cast<size_t>(e)] = c;
    LaurentPolyQuad pw = laurent_const(P.p, QuadExt(Rational(1)));
    for (long i = 0; i < e; ++i) pw = pw * Y;
    rem = rem - c * pw;
  }
  if (!rem.is_zero()) out[0] = rem.coeff(0);
  return out;
}

std::string laurent_str(const LaurentPolyQuad& a) {
  if (a.terms.empty()) return "0";
  std::string s;
  for (const auto& [e, c] : a.terms) {
    if (!s.empty()) s += "  +  ";
    s += "(" + quadext_str(c) + ")*X^" + std::to_string(e);
  }
  return s;
}

}  // namespace ml
