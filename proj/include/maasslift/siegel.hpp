// Local series engine.
//
// For an even-size form h and a prime p, the local series b_p(h, s) is a
// polynomial in t = p^{-s}; it factors as gamma * F with F(0) = 1, and
// the normalization Ftilde(X) = X^{-f} F(p^{-n-1/2} X) (size 2n,
// f = conductor exponent of the invariant D_h at p) is symmetric under
// X -> X^{-1}.  Low-order b-coefficients are computed by exhaustive
// character sums over symmetric matrices with p-power denominators; the
// full polynomial F is recovered from them by exact division plus the
// symmetry completion, and every computed coefficient is re-verified
// against the product gamma * F.
#pragma once

#include "maasslift/laurent.hpp"
#include "maasslift/matrixq.hpp"
#include "maasslift/quadform.hpp"

namespace ml {

// nu(alpha) = [alpha Z^m + Z^m : Z^m] for a symmetric rational matrix
// whose denominators are powers of a single prime; equals
// p^{sum max(-e_i, 0)} over the elementary divisor exponents e_i of
// alpha.  Mixed-prime denominators are a usage error.
Int nu(const MatrixQ& alpha);

// b-coefficients of t^0..t^{j_max}, each an exact integer: coefficient j
// is the character sum over classes alpha with nu(alpha) = p^j of
// e^{2 pi i tr(h alpha)}.  size(h) in {2,4}; j_max within capability.
std::vector<Int> siegel_bruteforce(const HalfIntegralForm& h, long p, long j_max);

// The closed-form factor: numerator (1-X) prod_{j=1..n} (1-p^{2j}X^2),
// denominator (1 - chi p^n X) with chi the splitting symbol of the
// discriminant field of (-1)^n D_h at p.
struct GammaData {
  std::vector<Int> num;
  std::vector<Int> den;
  std::vector<Int> reduced;  // num/den after exact cancellation
  int chi = 0;
};
// n must equal half the size of h (passed explicitly as a guard).
GammaData gamma_poly(long n, const HalfIntegralForm& h, long p);

// Everything local to (h, p).
struct LocalSiegelData {
  HalfIntegralForm h;
  long p = 0;
  long n = 0;     // half the size
  long fp = 0;    // conductor exponent of D_h at p
  long jmax = 0;  // exact b-coefficients available for t^0..t^jmax
  std::vector<Int> b;
  GammaData gamma;
  std::vector<Int> F;       // degree 2*fp, F[0] = 1
  LaurentPolyQuad Ftilde;   // support within [-fp, fp], symmetric
};

// Full pipeline: brute force, reconstruct F, verify product and
// functional equation.  Throws MathError if any cross-check fails.
LocalSiegelData local_siegel_data(const HalfIntegralForm& h, long p);

// F alone (degree 2*fp, constant term 1).
std::vector<Int> F_poly(const HalfIntegralForm& h, long p);

// Ftilde alone.
LaurentPolyQuad F_tilde(const HalfIntegralForm& h, long p);

}  // namespace ml
