// Positive definite quadratic forms and their local invariants.
//
// A "half-integral form" h (integer diagonal, half-integer off-diagonal)
// is stored throughout as the doubled matrix T = 2h, which is even
// integral: integer entries, even diagonal.  T is also the Gram matrix of
// the associated even lattice.  The invariant D_h = 4^{[m/2]} det h reads
// off T as det T for even m and det T / 2 for odd m.
//
// Places of Q are encoded as: v = 0 for the archimedean place, v = p for
// a finite prime.
#pragma once

#include "maasslift/matrixq.hpp"
#include "maasslift/numbers.hpp"

#include <optional>

namespace ml {

using IntMat = std::vector<std::vector<Int>>;
using IntVec = std::vector<Int>;

struct HalfIntegralForm {
  long m = 0;   // size
  IntMat T;     // = 2h, even integral, positive definite

  const Int& t(long i, long j) const { return T[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

// Validate and build: T symmetric, even diagonal, positive definite.
HalfIntegralForm make_form(const IntMat& T);

// Canonical string encoding of the doubled matrix, row-major:
// "2,1;1,2".  parse_form accepts exactly this format.
std::string encode_form(const HalfIntegralForm& h);
HalfIntegralForm parse_form(const std::string& s);

Int det_mat(const IntMat& T);
// Adjugate: adj(T) * T = det(T) * I.
IntMat adjugate(const IntMat& T);
bool is_positive_definite(const IntMat& T);

// T[x] = x^t T x and T(x,y) = x^t T y.
Int eval_form(const IntMat& T, const IntVec& x);
Int eval_pair(const IntMat& T, const IntVec& x, const IntVec& y);

// D_h = 4^{[m/2]} det h.
Int D_of(const HalfIntegralForm& h);

// ---------------------------------------------------------------------
// Discriminant bookkeeping.
// ---------------------------------------------------------------------

// Splitting N = d * f^2 where d is the absolute value of the discriminant
// of Q(sqrt((-1)^n N)).  Requires (-1)^n N = 0 or 1 mod 4.
struct DiscriminantData {
  Int N;  // the input
  Int d;  // |fundamental discriminant|, 1 if (-1)^n N is a square
  Int f;  // conductor-like square root of N/d
};
DiscriminantData disc_split(const Int& N, long n, const char* who = "disc_split");
bool is_disc_value(const Int& N, long n);  // (-1)^n N = 0,1 mod 4, N > 0

// ord_p of the f-part of N (requires N a valid value as above).
long f_p_of(const Int& N, long n, long p);

// psi_p: 1 if (-1)^n N is a square in Q_p, -1 if Q_p(sqrt((-1)^n N)) is
// unramified quadratic, 0 if ramified.
int psi_p(const Int& N, long n, long p);
// Same classification for an arbitrary nonzero rational argument M
// (no (-1)^n twist applied).
int psi_p_of(const Rational& M, long p);

// ---------------------------------------------------------------------
// p-adic invariants of quadratic spaces.
// ---------------------------------------------------------------------

// Hilbert symbol (a,b)_v for nonzero rationals.
int hilbert(const Rational& a, const Rational& b, long v);

// Diagonalize a nondegenerate symmetric rational matrix by congruence;
// returns the diagonal entries (all nonzero).
std::vector<Rational> diagonalize_sym(const MatrixQ& S);

// Hasse invariant with the product over i <= j of (a_i, a_j)_v.  (The
// variant over i < j differs by (det, -1)_v; this convention is the one
// under which the eta-sign product tests close, see eta below.)
int hasse(const MatrixQ& S, long v);
int hasse_of_diag(const std::vector<Rational>& diag, long v, bool include_equal);

// ---------------------------------------------------------------------
// Even lattices (index matrices S of odd rank 2n-1).
// ---------------------------------------------------------------------

struct EvenLattice {
  long size = 0;  // 2n-1
  IntMat S;       // even integral, positive definite
};

EvenLattice make_even_lattice(const IntMat& S);

// eta_v(S) = h_v(S) (det S, (-1)^{n-1} det S)_v (-1,-1)_v^{n(n-1)/2},
// for S of odd size 2n-1.
int eta(const EvenLattice& L, long v);

// Same, with the Hasse-product convention made explicit.  Passing false
// uses the strict i<j product, which differs from the i<=j one by the
// factor (det S, -1)_v; this is the deliberate sign-injection point used
// by the negative controls.
int eta_variant(const EvenLattice& L, long v, bool hasse_include_equal);

// Witt index of S over Q_p via the standard classification by
// (dimension, discriminant class, Hasse invariant).
long witt_index(const EvenLattice& L, long p);

// Diagnostic for the textbook relation dim = 2*witt + (2 - eta): reports
// both sides so callers can compare without asserting either variant.
struct WittEtaReport {
  long dim;
  long witt;
  int eta_p;
  bool satisfies_dim_relation;       // dim == 2*witt + 2 - eta_p
  bool satisfies_halfdim_relation;   // n == 2*witt + 2 - eta_p with dim = 2n-1
};
WittEtaReport witt_eta_report(const EvenLattice& L, long p);

// Dimension of the radical of (L/pL, S[x]/2 mod p); for p = 2 this is the
// quadratic radical: vectors in the radical of the polar form on which
// the quadratic form also vanishes.
long radical_dim(const EvenLattice& L, long p);

// True iff no index-p superlattice inside (1/p)L is still even integral.
bool is_maximal(const EvenLattice& L);

// Primes with radical dimension 1 resp. 2 (the index sets entering the
// local Laurent-polynomial cases); only primes dividing det S can occur.
std::vector<long> primes_radical(const EvenLattice& L, long dim_value);

// ---------------------------------------------------------------------
// Bordered forms.
// ---------------------------------------------------------------------

// Border the half-integral B (size m) by a pair (a, alpha) with
// alpha = S^{-1} w, S = 2B, w integral: the result is the half-integral
// matrix [[B, B alpha],[alpha^t B, a]] of size m+1, stored doubled as
// [[S, w],[w^t, 2a]].  Requires positivity, i.e. 2a det S > adj(S)[w].
HalfIntegralForm border(const HalfIntegralForm& B, const Int& a, const IntVec& w);

// Determinant invariant of the bordered pair: det of the doubled border,
// D = 2a det S - adj(S)[w]; positive exactly on valid pairs.
Int border_disc(const EvenLattice& L, const Int& a, const IntVec& w);

// ---------------------------------------------------------------------
// Enumeration and reduction (enumerate.cpp).
// ---------------------------------------------------------------------

// All classes of half-integral positive definite forms of size m with
// D <= D_max, one canonical representative per class, sorted by D then
// by encoding.  m <= 4.  box_slack (>= 1) widens the reduction box used
// for the scan; the class list must not depend on it, which gives an
// internal completeness cross-check.
std::vector<HalfIntegralForm> enumerate_forms(long m, const Int& D_max,
                                              const Rational& box_slack = Rational(1));

// Canonical representative of the class of h: the lexicographically
// smallest encoding among reduced candidates isometric to h.
HalfIntegralForm canonical_reduce(const HalfIntegralForm& h);

// Exhaustive isometry test: exists U in GL_m(Z) with U^t T1 U = T2.
bool isometric(const HalfIntegralForm& h1, const HalfIntegralForm& h2);

// Representation counts r(T, j) = #{x : T[x]/2 = j} for j = 1..bound
// (isometry invariants used to bucket classes before exact testing).
std::vector<long> repr_counts(const IntMat& T, long bound);

// Some positive definite half-integral B of size m in {1,3} with
// D_B = p; found by bounded search (existence is guaranteed).
HalfIntegralForm find_prime_disc_form(long p, long m);

}  // namespace ml
