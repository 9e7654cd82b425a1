// Concrete spaces of modular forms at desk scale: the one-dimensional
// level-1 cusp spaces with their Hecke eigenvalues, the weight k+1/2
// plus space at level 4 cut out of theta-power monomials, the operators
// U_k(a^2), T(p^2), P(l) on half-integral expansions, and the vanishing
// criterion for sign-eigenvectors of U_k(p^2) at level 4p.
#pragma once

#include "maasslift/qexp.hpp"

#include <map>
#include <vector>

namespace ml {

// theta = 1 + 2 sum_{n>=1} q^{n^2}.
QExpansion theta_series(long precision);
// F2 = sum over odd n of sigma_1(n) q^n (weight 2, level 4).
QExpansion f2_series(long precision);

// Classical level-1 generators (normalized constant term 1) and the
// weight-12 cusp form.
QExpansion eisenstein4(long precision);
QExpansion eisenstein6(long precision);
QExpansion delta_series(long precision);

// Dimension of the weight-w level-1 cusp space (even w >= 4), via the
// count of monomials in the weight-4/weight-6 generators.
long dim_cusp_level1(long w);

struct EigenformInt {
  long two_k = 0;                 // weight
  QExpansion q;                   // normalized: coefficient of q^1 is 1
  std::map<long, Int> eigenvalues;  // p -> a_p for primes p < precision
};

// The unique normalized eigenform when the cusp space has dimension 1
// (weights 12, 16, 18, 20, 22, 26); capability error otherwise.
EigenformInt level1_eigenform(long two_k, long precision);

// m is a permitted exponent for weight k+1/2: (-1)^k m = 0,1 mod 4.
bool is_plus_exponent(long k, const Int& m);

// Basis (reduced echelon, integral primitive rows) of the cuspidal plus
// subspace of span{theta^{2k+1-4j} F2^j}: constant term zero and c(m) = 0
// for every non-permitted exponent.  precision must be at least 4k + 10.
std::vector<QExpansion> plus_cusp_space(long k, long precision);

// c'(m) = c(p^2 m) + ((-1)^k m | p) p^{k-1} c(m) + p^{2k-1} c(m/p^2),
// the last term only when p^2 | m.  Output precision floor((in-1)/p^2)+1.
QExpansion hecke_half_T2(long p, long k, const QExpansion& g);

// c'(m) = c(a^2 m).  (k is carried for interface symmetry.)
QExpansion U_sq(long a, long k, const QExpansion& g);

// g - l^{1-k} g|(T(l^2) - U_k(l^2)), together with the coefficientwise
// prediction sum_m (1 - ((-1)^k m | l)) (c(m) - l^k c(m/l^2)) q^m; the
// report records whether the two agree on the common precision.  Because
// the plus-space operator at l = 2 drops the classes its raw coefficient
// formula leaks into, the combination is also evaluated with the raw
// (unprojected) operator; for odd l the two variants coincide.
struct POpResult {
  QExpansion via_definition;   // plus-space operator
  QExpansion via_raw_operator; // unprojected coefficient formula
  QExpansion predicted;
  bool agree = false;          // via_definition == predicted
  bool agree_raw = false;      // via_raw_operator == predicted
};
POpResult P_op(long ell, long k, const QExpansion& g);

struct EigenformHalf {
  long k = 0;          // weight k + 1/2
  QExpansion q;        // scaled to primitive integral coefficients
  EigenformInt matched;  // the weight-2k eigenform sharing its eigenvalues
};

// Verification that T(p^2) g = a_p g for all primes p <= p_max, where the
// a_p come from f; throws MathError on the first mismatch (wrong pairing
// or insufficient precision), otherwise returns the verified pairing.
struct ShimuraReport {
  std::vector<long> verified_primes;
};
ShimuraReport shimura_match(const EigenformHalf& g, const EigenformInt& f, long p_max);

// The unique (up to scale) plus-space eigenform of weight k+1/2, with its
// integral-weight partner attached and verified up to p_max.
EigenformHalf plus_eigenform(long k, long precision, long p_max);

// Coefficient table of a weight k+1/2 form at level 4p with a declared
// U_k(p^2)-eigensign.
struct NewformPlusTable {
  long k = 0;
  long p = 0;
  int eps = 0;                  // declared sign
  std::map<Int, Rational> coeffs;  // m -> c(m), partial
  long m_max = 0;               // coefficients known for all m <= m_max
};

// Synthetic eigensign table: c(p^{2j} u) = (eps p^{k-1})^j X(u) for p-free
// u, with X forced to zero where the splitting symbol of (-1)^k u at p
// equals eps.  Satisfies both criterion conditions by construction.
NewformPlusTable synthetic_plus_table(long k, long p, int eps,
                                      const std::map<Int, Rational>& X, long m_max);

// Checks on a declared sign table: (i) c(m) = 0 whenever the splitting
// symbol of (-1)^k m at p equals eps, and (ii) c(p^2 m) = eps p^{k-1} c(m)
// for m <= m_max.  Requires data up to m_max * p^2.
struct PlusVanishingReport {
  bool vanishing_holds = false;   // condition (i)
  bool eigen_holds = false;       // condition (ii)
  Int witness_vanishing;          // first violating m, if any
  Int witness_eigen;
};
PlusVanishingReport plus_vanishing_criterion(const NewformPlusTable& table, long p, int eps,
                                             const Int& m_max);

}  // namespace ml
