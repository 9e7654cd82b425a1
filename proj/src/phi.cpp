#include "maasslift/phi.hpp"

namespace ml {

namespace {

LaurentPolyQuad l_tagged(long p, long e) {
  LaurentPolyQuad r(p);
  for (long i = 0; i <= e; ++i) r.set_coeff(e - 2 * i, QuadExt(p, Rational(1), Rational(0)));
  return r;
}

}  // namespace

LaurentPolyQuad l_poly(long e) { return l_tagged(0, e); }

LaurentPolyQuad lambda_shifted(long p, const Int& N, long n, long j) {
  long f = f_p_of(N, n, p) - j;
  if (f < 0) return laurent_zero(p);
  LaurentPolyQuad lam = l_tagged(p, f);
  int psi = psi_p(N, n, p);
  if (psi != 0 && f >= 1) {
    QuadExt scale = Rational(psi) * sqrtp_power(p, -1);
    lam = lam - scale * l_tagged(p, f - 1);
  }
  return lam;
}

LaurentPolyQuad lambda_poly(long p, const Int& N, long n) {
  return lambda_shifted(p, N, n, 0);
}

LaurentPolyQuad lSN_poly(long p, const EvenLattice& S, const Int& N, long n) {
  if (!is_maximal(S)) throw UsageError("lSN_poly: lattice must be maximal");
  long s = radical_dim(S, p);
  LaurentPolyQuad r = lambda_poly(p, N, n);
  if (s == 0) return r;
  if (s == 1) {
    QuadExt scale = Rational(eta(S, p)) * sqrtp_power(p, 1);
    return r + scale * lambda_shifted(p, N, n, 1);
  }
  if (s == 2) {
    LaurentPolyQuad mid = lambda_shifted(p, N, n, 1);
    if (!mid.is_zero()) {
      // A nonzero shifted term forces p^2 | N, so the symbol argument
      // (-1)^n N / p^2 is an integer.
      Int p2(static_cast<long>(p) * p);
      if (N % p2 != 0) throw MathError("lSN_poly: conductor bookkeeping is inconsistent");
      Int arg = N / p2;
      if (n % 2) arg = -arg;
      QuadExt scale = Rational(kronecker(arg, Int(p))) * sqrtp_power(p, 1);
      r = r - scale * mid;
    }
    QuadExt pscale(p, Rational(p), Rational(0));
    return r - pscale * lambda_shifted(p, N, n, 2);
  }
  throw MathError("lSN_poly: radical dimension out of range");
}

std::vector<Rational> phi_local(const LocalSiegelData& d) {
  Int D = D_of(d.h);
  LaurentPolyQuad rem = d.Ftilde;
  std::vector<Rational> out(static_cast<size_t>(d.fp) + 1, Rational(0));
  for (long j = 0; j <= d.fp; ++j) {
    // The j-th basis element tops out at X^{fp-j} with unit coefficient,
    // so the remaining top coefficient is phi_p(j) p^{-j/2}.
    QuadExt top = rem.coeff(d.fp - j);
    QuadExt val = top * sqrtp_power(d.p, j);
    if (val.irr != 0)
      throw MathError("phi_local: expansion coefficient not rational at p=" +
                      std::to_string(d.p) + ", form " + encode_form(d.h));
    out[static_cast<size_t>(j)] = val.rat;
    if (val.rat != 0) {
      QuadExt scale = val.rat * sqrtp_power(d.p, -j);
      rem = rem - scale * lambda_shifted(d.p, D, d.n, j);
    }
  }
  if (!rem.is_zero())
    throw MathError("phi_local: nonzero residual after back-substitution at p=" +
                    std::to_string(d.p) + ", form " + encode_form(d.h));
  if (out[0] != 1)
    throw MathError("phi_local: leading coefficient is not 1");
  return out;
}

std::vector<Rational> phi_local(const HalfIntegralForm& h, long p) {
  return phi_local(local_siegel_data(h, p));
}

PhiTable phi_table(const HalfIntegralForm& h) {
  PhiTable t;
  t.h = h;
  long n = h.m / 2;
  DiscriminantData dd = disc_split(D_of(h), n, "phi_table");
  t.conductor = dd.f;
  for (const auto& [p, e] : factor(dd.f)) {
    (void)e;
    long pl = to_long(p);
    std::vector<Rational> loc = phi_local(h, pl);
    for (size_t j = 0; j < loc.size(); ++j)
      t.local[{pl, static_cast<long>(j)}] = loc[j];
  }
  for (const Int& d : divisors(dd.f)) {
    Rational prod(1);
    for (const auto& [p, e] : factor(d)) prod *= t.local.at({to_long(p), e});
    if (prod.get_den() != 1)
      throw MathError("phi_table: non-integral value at d=" + d.get_str() + ", form " +
                      encode_form(h));
    t.entries[d] = prod.get_num();
  }
  return t;
}

Int phi(const Int& d, const HalfIntegralForm& h) {
  if (d <= 0) throw UsageError("phi: d must be positive");
  long n = h.m / 2;
  DiscriminantData dd = disc_split(D_of(h), n, "phi");
  if (dd.f % d != 0) throw UsageError("phi: d does not divide the conductor");
  Rational prod(1);
  for (const auto& [p, e] : factor(d)) {
    std::vector<Rational> loc = phi_local(h, to_long(p));
    prod *= loc.at(static_cast<size_t>(e));
  }
  if (prod.get_den() != 1)
    throw MathError("phi: non-integral value at d=" + d.get_str() + ", form " + encode_form(h));
  return prod.get_num();
}

Int beta_eval(long j, const Int& a_p, long k, long p) {
  if (j < -1) throw UsageError("beta_eval: index below -1");
  if (k < 1) throw UsageError("beta_eval: weight parameter must be positive");
  if (j == -1) return Int(0);
  Int prev(0), cur(1);
  Int pk = pow_int(Int(p), static_cast<unsigned long>(2 * k - 1));
  for (long i = 0; i < j; ++i) {
    Int next = a_p * cur - pk * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Int lambda_int(long p, const Int& N, long n, long j, long k, const Int& a_p) {
  long f = f_p_of(N, n, p) - j;
  if (f < 0) return Int(0);
  int psi = psi_p(N, n, p);
  Int val = beta_eval(f, a_p, k, p);
  if (psi != 0 && f >= 1)
    val -= Int(psi) * pow_int(Int(p), static_cast<unsigned long>(k - 1)) *
           beta_eval(f - 1, a_p, k, p);
  return val;
}

PhiExpansionReport phi_expansion_check(const HalfIntegralForm& h) {
  PhiExpansionReport rep;
  long n = h.m / 2;
  Int D = D_of(h);
  DiscriminantData dd = disc_split(D, n, "phi_expansion_check");
  rep.expansion_holds = true;
  for (const auto& [pz, e] : factor(dd.f)) {
    (void)e;
    long p = to_long(pz);
    LocalSiegelData d = local_siegel_data(h, p);
    std::vector<Rational> phis = phi_local(d);
    LaurentPolyQuad sum = laurent_zero(p);
    for (size_t j = 0; j < phis.size(); ++j) {
      QuadExt scale = QuadExt(phis[j]) * sqrtp_power(p, -static_cast<long>(j));
      sum = sum + scale * lambda_shifted(p, D, n, static_cast<long>(j));
      ++rep.locals_checked;
    }
    if (!(sum == d.Ftilde)) rep.expansion_holds = false;
  }
  PhiTable pt = phi_table(h);
  rep.integral = true;
  for (const Int& d : divisors(pt.conductor)) {
    Rational prod(1);
    for (const auto& [p, e] : factor(d))
      prod *= pt.local.at({to_long(p), e});
    if (prod.get_den() != 1 || prod.get_num() != pt.entries.at(d)) rep.integral = false;
    ++rep.divisors_checked;
  }
  return rep;
}

}  // namespace ml
