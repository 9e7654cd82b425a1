// The l/lambda Laurent basis, the local expansion coefficients phi_p
// extracted from the normalized local series, their multiplicative
// assembly phi(d; h), and the exact integer normalization used when the
// series are evaluated at Hecke parameters.
#pragma once

#include "maasslift/siegel.hpp"

#include <map>

namespace ml {

// l_e = X^e + X^{e-2} + ... + X^{-e}; zero for e < 0.  Coefficients are
// rational, so the result carries the field tag 0 and mixes freely.
LaurentPolyQuad l_poly(long e);

// lambda_{p,N} = l_f - psi p^{-1/2} l_{f-1} over Q(sqrt p), where
// f = ord_p of the conductor part of N and psi classifies the splitting
// of (-1)^n N at p.  Only the parity of n enters.
LaurentPolyQuad lambda_poly(long p, const Int& N, long n);

// lambda_{p, p^{-2j} N} computed without forming the quotient: the
// splitting symbol is a square-class invariant and the conductor
// exponent just drops by j.  Zero when the exponent would be negative.
LaurentPolyQuad lambda_shifted(long p, const Int& N, long n, long j);

// The lattice-adapted variant: by the dimension s of the radical of
// S mod p,
//   s = 0:  lambda_{p,N}
//   s = 1:  lambda_{p,N} + eta_p(S) p^{1/2} lambda_{p,p^{-2}N}
//   s = 2:  lambda_{p,N} - ((-1)^n p^{-2}N | p) p^{1/2} lambda_{p,p^{-2}N}
//           - p lambda_{p,p^{-4}N}
// S must be maximal (precondition error otherwise).
LaurentPolyQuad lSN_poly(long p, const EvenLattice& S, const Int& N, long n);

// Coefficients phi_p(0..f_p) of the expansion
//   Ftilde_{p,h}(X) = sum_j phi_p(j) p^{-j/2} lambda_{p, p^{-2j} D_h}(X).
// The lambda's are triangular in the l-basis, so the solve is exact
// back-substitution; a nonzero residual is an internal error.
std::vector<Rational> phi_local(const LocalSiegelData& d);
std::vector<Rational> phi_local(const HalfIntegralForm& h, long p);

// All local and global expansion coefficients of one form.
struct PhiTable {
  HalfIntegralForm h;
  Int conductor;                                    // f-part of D_h
  std::map<Int, Int> entries;                       // d | conductor -> phi(d;h)
  std::map<std::pair<long, long>, Rational> local;  // (p, j) -> phi_p(j;h)
};
PhiTable phi_table(const HalfIntegralForm& h);

// phi(d; h) = prod_p phi_p(ord_p d; h) for d dividing the conductor of
// D_h; usage error otherwise.  The value is asserted to be an integer.
Int phi(const Int& d, const HalfIntegralForm& h);

// beta_j = a_p beta_{j-1} - p^{2k-1} beta_{j-2}, beta_{-1} = 0,
// beta_0 = 1: the integer normalization p^{(k-1/2)j} l_j(alpha_p) of the
// l-basis evaluated at the Satake parameter with a_p = p^{k-1/2}
// (alpha_p + alpha_p^{-1}).
Int beta_eval(long j, const Int& a_p, long k, long p);

// Integer normalization p^{(k-1/2)f'} lambda_{p, p^{-2j} N}(alpha_p)
// = beta_{f'} - psi p^{k-1} beta_{f'-1} with f' = f_p(N) - j; zero when
// f' < 0.
Int lambda_int(long p, const Int& N, long n, long j, long k, const Int& a_p);

// End-to-end audit of one form's expansion data:
//   - for every p dividing the conductor of D_h, the recombination
//     sum_j phi_p(j) p^{-j/2} lambda_{p, p^{-2j} D_h} equals Ftilde_{p,h}
//     exactly over Q(sqrt p);
//   - every divisor value phi(d; h), recomputed as the rational product
//     of local coefficients, is an integer and matches the table.
struct PhiExpansionReport {
  bool expansion_holds = false;
  bool integral = false;
  long locals_checked = 0;    // local coefficients recombined
  long divisors_checked = 0;  // divisor values re-derived
};
PhiExpansionReport phi_expansion_check(const HalfIntegralForm& h);

}  // namespace ml
