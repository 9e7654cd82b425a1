// The global layer: degree-2n coefficient tables built from a weight
// k+1/2 eigenform by two independent routes, the linear relation system
// tying a table to a single arithmetic function, and the Jacobi-coefficient
// side (index lattices of odd rank, bordered forms, and the product
// formulas that pin the tables entrywise).
#pragma once

#include "maasslift/modforms.hpp"
#include "maasslift/phi.hpp"
#include "maasslift/quadform.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ml {

// ---------------------------------------------------------------------
// Coefficient tables of degree-2n cusp forms.
// ---------------------------------------------------------------------

struct CoefficientTable {
  long two_n = 0;  // matrix size of the indexing classes
  long k = 0;      // half-integral weight parameter (0 when unknown, e.g.
                   // for tables loaded from bare files); the form weight
                   // is k + two_n/2
  Int dmax;        // every class with D_h <= dmax is present
  std::vector<HalfIntegralForm> classes;    // canonical reps, sorted by (D, encoding)
  std::map<std::string, Rational> entries;  // encode_form(rep) -> coefficient

  long n() const { return two_n / 2; }
  bool has(const HalfIntegralForm& h) const;
  // Canonicalizes h and looks it up; UsageError naming the class if absent.
  Rational value(const HalfIntegralForm& h) const;
};

// Arithmetic function m -> c(m) on the progression (-1)^k m = 0,1 mod 4.
struct MaassParameter {
  long k_parity = 0;  // parity of k; fixes the admissible progression
  Int M;              // values present for every admissible m <= M
  std::map<Int, Rational> values;

  bool admissible(const Int& m) const;
  // Value at an admissible m <= M; UsageError on a coverage gap.
  Rational at(const Int& m) const;
  // Zero for non-integral or inadmissible arguments, at() otherwise.
  Rational at_or_zero(const Rational& x) const;
};

// ---------------------------------------------------------------------
// Lifted coefficients, two routes.
// ---------------------------------------------------------------------

// Route A: c_g(d_h) times the product over p | f_h of the local factor
// sum_j phi_p(j;h) p^{(k-1)j} Lambda_{p, p^{-2j} D_h}, each factor an
// integer (MathError otherwise).
Rational lift_coeff_A(const HalfIntegralForm& h, const EigenformHalf& g);

// Route B: sum over d | f_h of d^{k-1} phi(d;h) c_g(d^{-2} D_h).
Rational lift_coeff_B(const HalfIntegralForm& h, const EigenformHalf& g);

// Table of all classes of size two_n with D_h <= dmax, coefficients by
// route B; class work is parallelized (global thread setting), assembly
// is ordered and deterministic.
CoefficientTable build_lift_table(const EigenformHalf& g, long two_n, const Int& dmax);

// ---------------------------------------------------------------------
// The relation system between a table and a single function c.
// ---------------------------------------------------------------------

struct MaassVerifyReport {
  bool all_hold = true;
  long checked = 0;
  std::vector<std::string> failing;  // encodings of classes where the relation fails
};
// Checks c_F(h) = sum_{d | f_h} d^{k-1} phi(d;h) c(d^{-2} D_h) for every
// class in the table.  Coverage gaps in c raise UsageError.
MaassVerifyReport maass_verify(const CoefficientTable& table, const MaassParameter& c, long k);

struct MaassSolveResult {
  bool consistent = false;
  std::vector<Int> domain;    // admissible m <= M, ascending (the unknowns)
  MaassParameter particular;  // one exact solution, when consistent
  std::vector<std::map<Int, Rational>> kernel;  // basis of homogeneous solutions
  long equations = 0;         // classes used
};
// Exact affine solution set of the relation system in the unknowns c(m),
// m admissible and <= M.  Only classes h with D_h <= M contribute
// equations (their entire divisor cascade then stays within the domain).
MaassSolveResult maass_solve(const CoefficientTable& table, long k, const Int& M);

// The square-discriminant sum sum_{d | f_h} d^{k-1} phi(d;h) (f_h/d)^k,
// which must vanish when n = 2 mod 4 and d_h = 1 (UsageError when the
// preconditions fail).  Returns true iff the sum is zero.
bool square_disc_sum_check(const HalfIntegralForm& h, long k);

// ---------------------------------------------------------------------
// Jacobi coefficient tables (index S of odd rank).
// ---------------------------------------------------------------------

// Entries are keyed by (a, w) with w = S*alpha integral and
// D(a, w) = det S (2a - S[alpha]) = 2a det S - adj(S)[w] > 0.
struct JacobiTable {
  EvenLattice S;
  Int bound;        // all keys with 0 < D <= bound and |w_i| <= wrange
  long wrange = 0;  // symmetric window for the w coordinates
  std::map<std::pair<Int, IntVec>, Rational> entries;

  Int disc_key(const Int& a, const IntVec& w) const;
};

// Deterministic w-window used by every table builder: isqrt(bound) + 1.
long jacobi_wrange(const Int& bound);

// Coefficients c_F of the bordered classes [[S, w],[w^t, 2a]]/2, read from
// a degree-(size+1) table; bound = table.dmax.  Missing classes raise
// UsageError.
JacobiTable fj_extract(const CoefficientTable& table, const EvenLattice& S);

struct MTypeReport {
  bool is_mtype = true;
  std::map<Int, Rational> C;  // D -> common value (first seen, on failure)
  std::pair<Int, IntVec> key1, key2;  // witness pair when not of M-type
};
// Groups entries by D(a, w); true iff constant on every fiber.
MTypeReport mtype_check(const JacobiTable& jt);

// Table (a, w) -> c_g(D(a, w)) for a maximal index of determinant 2
// (UsageError otherwise).
JacobiTable index2_jacobi_table(const EigenformHalf& g, const EvenLattice& S, const Int& bound);

// One Jacobi coefficient by the eigenform product formula
// c_g(d_D) * prod_p Lambda_{p,D}(a_p-normalized), valid for maximal S with
// no radical primes (CapabilityError when the index would require newform
// data); f supplies the eigenvalues.
Rational jacobi_product_coeff(const EvenLattice& S, const EigenformHalf& g,
                              const EigenformInt& f, const Int& a, const IntVec& w);

// Two-summand Jacobi table attached to a pair (g, h) at a prime-determinant
// index B (D_B = p prime): entries
//   c_g(D) - p^k c_g(p^{-2} D)
//     + 2^{-b_p(D)} c_h(D) * [sigma(f) - psi sigma(f-1) - p sigma(f-1) + p psi sigma(f-2)]
// with f = f_p(D), psi the splitting symbol, sigma the geometric p-sum;
// h = nullptr means the zero form.  The bracketed factor is the exact
// value of p^{f/2} (lambda_{p,D}(p^{-1/2}) - p^{1/2} lambda_{p,p^{-2}D}(p^{-1/2})).
JacobiTable pair_jacobi_table(const HalfIntegralForm& B, const EigenformHalf& g,
                              const NewformPlusTable* h, const Int& bound);

struct BorderReachResult {
  bool criterion = false;      // the residue-condition side
  bool witness_found = false;  // the explicit-search side
  Int a;                       // witness border, valid when found
  IntVec w;
};
// For B with D_B = p prime: tests the residue criterion for m to be a
// bordered discriminant of B, and independently searches a witness with
// a <= search_bound.  Both sides are reported; they must agree whenever
// the search bound suffices.
BorderReachResult border_reach(const HalfIntegralForm& B, const Int& m, long search_bound);

struct BorderRecursionReport {
  bool precondition_ok = false;  // table satisfies the relation system with c
  bool all_hold = true;
  long checked = 0;
  std::string witness;  // encoding of the first failing bordered class
};
// Checks c_F(bordered) = c(D) - s p^k c(p^{-2} D) with s = -eta_p(2B) over
// all borders of B within the table's range.
BorderRecursionReport border_recursion_check(const CoefficientTable& table,
                                             const HalfIntegralForm& B,
                                             const MaassParameter& c, long k);

struct DiscScanResult {
  std::vector<Int> achieved;   // {D_h : h of size 2n, D_h <= bound}
  std::vector<Int> predicted;  // the admissible progression, minus {1} when n = 2 mod 4
  bool match = false;
};
DiscScanResult disc_scan(long n, const Int& bound);

struct EtaProductReport {
  Int disc;          // D_B (must be squarefree)
  int product = 0;   // prod over p | D_B of eta_p(B)
  int expected = 0;  // +1 for n = 0,1 mod 4, -1 for n = 2,3 mod 4
  bool holds = false;
};
// Product of the local signs over p | D_B against the parity prediction.
// flip_hasse_convention switches eta to the strict-product convention and
// serves as the negative control's sign injection.
EtaProductReport eta_sign_product_check(const HalfIntegralForm& B,
                                        bool flip_hasse_convention = false);

}  // namespace ml
