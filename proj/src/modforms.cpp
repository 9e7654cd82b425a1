#include "maasslift/modforms.hpp"

#include <algorithm>

#include "maasslift/matrixq.hpp"
#include "maasslift/quadform.hpp"

namespace ml {

QExpansion theta_series(long precision) {
  QExpansion t(precision);
  t.coeff(0) = 1;
  for (long n = 1; n * n < precision; ++n) t.coeff(n * n) = 2;
  return t;
}

QExpansion f2_series(long precision) {
  QExpansion f(precision);
  for (long d = 1; d < precision; d += 2)
    for (long m = d; m < precision; m += 2 * d) f.coeff(m) += d;  // m odd: odd d times odd cofactor
  return f;
}

namespace {

// 1 + scale * sum_n sigma_e(n) q^n.
QExpansion eisenstein(long precision, long e, long scale) {
  QExpansion g(precision);
  g.coeff(0) = 1;
  for (long d = 1; d < precision; ++d) {
    Int de = pow_int(Int(d), static_cast<unsigned long>(e));
    for (long m = d; m < precision; m += d) g.coeff(m) += Rational(Int(scale) * de);
  }
  return g;
}

}  // namespace

QExpansion eisenstein4(long precision) { return eisenstein(precision, 3, 240); }
QExpansion eisenstein6(long precision) { return eisenstein(precision, 5, -504); }

QExpansion delta_series(long precision) {
  QExpansion e4 = eisenstein4(precision);
  QExpansion e6 = eisenstein6(precision);
  return qexp_div_exact(qexp_pow(e4, 3) - e6 * e6, Int(1728));
}

long dim_cusp_level1(long w) {
  if (w < 4 || w % 2) throw UsageError("dim_cusp_level1: weight must be even and >= 4");
  long count = 0;
  for (long b = 0; 6 * b <= w; ++b)
    if ((w - 6 * b) % 4 == 0) ++count;
  return count - 1;
}

EigenformInt level1_eigenform(long two_k, long precision) {
  long dim = dim_cusp_level1(two_k);
  if (dim != 1)
    throw CapabilityError("level1_eigenform: cusp space of weight " + std::to_string(two_k) +
                          " has dimension " + std::to_string(dim) + ", need 1");
  long w = two_k - 12;  // complement is a one-dimensional non-cusp weight
  long a4 = -1, b6 = -1;
  for (long b = 0; 6 * b <= w; ++b)
    if ((w - 6 * b) % 4 == 0) {
      a4 = (w - 6 * b) / 4;
      b6 = b;
      break;
    }
  if (a4 < 0) throw MathError("level1_eigenform: no generator monomial");
  EigenformInt f;
  f.two_k = two_k;
  f.q = delta_series(precision) * qexp_pow(eisenstein4(precision), a4) *
        qexp_pow(eisenstein6(precision), b6);
  if (f.q.coeff(1) != 1) throw MathError("level1_eigenform: normalization failed");
  for (long p = 2; p < precision; ++p) {
    if (!is_prime(Int(p))) continue;
    const Rational& ap = f.q.coeff(p);
    if (ap.get_den() != 1) throw MathError("level1_eigenform: non-integral eigenvalue");
    f.eigenvalues[p] = ap.get_num();
  }
  return f;
}

bool is_plus_exponent(long k, const Int& m) {
  Int v = (k % 2) ? Int(-m) : m;
  long r = to_long(((v % 4) + 4) % 4);
  return r == 0 || r == 1;
}

std::vector<QExpansion> plus_cusp_space(long k, long precision) {
  if (k < 2) throw UsageError("plus_cusp_space: weight parameter too small");
  if (precision < 4 * k + 10)
    throw UsageError("plus_cusp_space: precision below the determining bound");
  QExpansion theta = theta_series(precision);
  QExpansion f2 = f2_series(precision);
  std::vector<QExpansion> monomials;
  for (long j = 0; 4 * j <= 2 * k + 1; ++j)
    monomials.push_back(qexp_pow(theta, 2 * k + 1 - 4 * j) * qexp_pow(f2, j));
  long nm = static_cast<long>(monomials.size());

  // Linear conditions: vanishing constant term and vanishing at every
  // non-permitted exponent.
  std::vector<long> cond_rows{0};
  for (long m = 1; m < precision; ++m)
    if (!is_plus_exponent(k, Int(m))) cond_rows.push_back(m);
  MatrixQ M(static_cast<long>(cond_rows.size()), nm);
  for (long i = 0; i < M.rows; ++i)
    for (long j = 0; j < nm; ++j)
      M.at(i, j) = monomials[static_cast<size_t>(j)].coeff(cond_rows[static_cast<size_t>(i)]);
  std::vector<std::vector<Rational>> ker = kernel_basis(M);

  // Expand kernel vectors, then echelonize the expansions themselves so
  // the returned basis is canonical; scale to primitive integral rows.
  if (ker.empty()) return {};
  MatrixQ rows(static_cast<long>(ker.size()), precision);
  for (long i = 0; i < rows.rows; ++i) {
    QExpansion g(precision);
    for (long j = 0; j < nm; ++j)
      if (ker[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
        g = g + ker[static_cast<size_t>(i)][static_cast<size_t>(j)] * monomials[static_cast<size_t>(j)];
    for (long m = 0; m < precision; ++m) rows.at(i, m) = g.coeff(m);
  }
  rref(rows);
  std::vector<QExpansion> basis;
  for (long i = 0; i < rows.rows; ++i) {
    bool nonzero = false;
    Int num_gcd(0), den_lcm(1);
    for (long m = 0; m < precision; ++m) {
      const Rational& x = rows.at(i, m);
      if (x == 0) continue;
      nonzero = true;
      num_gcd = gcd(num_gcd, x.get_num());
      den_lcm = den_lcm / gcd(den_lcm, x.get_den()) * x.get_den();
    }
    if (!nonzero) continue;
    Rational scale = Rational(den_lcm) / Rational(num_gcd < 0 ? -num_gcd : num_gcd);
    QExpansion g(precision);
    long lead = -1;
    for (long m = 0; m < precision; ++m) {
      g.coeff(m) = scale * rows.at(i, m);
      if (lead < 0 && g.coeff(m) != 0) lead = m;
    }
    if (lead >= 0 && g.coeff(lead) < 0)
      g = Rational(-1) * g;
    basis.push_back(g);
  }
  return basis;
}

namespace {

// The displayed coefficient formula with no plus-support restriction.
QExpansion hecke_half_T2_raw(long p, long k, const QExpansion& g) {
  long p2 = p * p;
  long out_prec = (g.prec - 1) / p2 + 1;
  QExpansion r(out_prec);
  Int pk1 = pow_int(Int(p), static_cast<unsigned long>(k - 1));
  Int p2k1 = pow_int(Int(p), static_cast<unsigned long>(2 * k - 1));
  for (long m = 0; m < out_prec; ++m) {
    Rational v = g.coeff(p2 * m);
    Int chi_arg = (k % 2) ? Int(-m) : Int(m);
    int chi = kronecker(chi_arg, Int(p));
    if (chi) v += Rational(Int(chi) * pk1) * g.coeff(m);
    if (m % p2 == 0) v += Rational(p2k1) * g.coeff(m / p2);
    r.coeff(m) = v;
  }
  return r;
}

}  // namespace

QExpansion hecke_half_T2(long p, long k, const QExpansion& g) {
  if (p < 2 || !is_prime(Int(p))) throw UsageError("hecke_half_T2: p must be prime");
  long p2 = p * p;
  long out_prec = (g.prec - 1) / p2 + 1;
  QExpansion r(out_prec);
  Int pk1 = pow_int(Int(p), static_cast<unsigned long>(k - 1));
  Int p2k1 = pow_int(Int(p), static_cast<unsigned long>(2 * k - 1));
  for (long m = 0; m < out_prec; ++m) {
    // On classes that cannot support plus-space coefficients the raw
    // formula can leak (only at p = 2, through its first term); the
    // operator on the plus space drops those classes.  For odd p this is
    // a no-op on plus-space input.  The eigenvalue match with the
    // integral-weight partner validates the convention.
    if (!is_plus_exponent(k, Int(m))) continue;
    Rational v = g.coeff(p2 * m);
    Int chi_arg = (k % 2) ? Int(-m) : Int(m);
    int chi = kronecker(chi_arg, Int(p));
    if (chi) v += Rational(Int(chi) * pk1) * g.coeff(m);
    if (m % p2 == 0) v += Rational(p2k1) * g.coeff(m / p2);
    r.coeff(m) = v;
  }
  return r;
}

QExpansion U_sq(long a, long k, const QExpansion& g) {
  (void)k;
  if (a < 1) throw UsageError("U_sq: parameter must be positive");
  long a2 = a * a;
  long out_prec = (g.prec - 1) / a2 + 1;
  QExpansion r(out_prec);
  for (long m = 0; m < out_prec; ++m) r.coeff(m) = g.coeff(a2 * m);
  return r;
}

POpResult P_op(long ell, long k, const QExpansion& g) {
  if (k < 1) throw UsageError("P_op: weight parameter must be positive");
  QExpansion tg = hecke_half_T2(ell, k, g);
  QExpansion tg_raw = hecke_half_T2_raw(ell, k, g);
  QExpansion ug = U_sq(ell, k, g);
  Rational lk = Rational(1) / Rational(pow_int(Int(ell), static_cast<unsigned long>(k - 1)));
  POpResult res;
  res.via_definition = g - lk * (tg - ug);
  res.via_raw_operator = g - lk * (tg_raw - ug);

  long out_prec = res.via_definition.prec;
  long ell2 = ell * ell;
  Int ellk = pow_int(Int(ell), static_cast<unsigned long>(k));
  QExpansion pred(out_prec);
  for (long m = 0; m < out_prec; ++m) {
    Int chi_arg = (k % 2) ? Int(-m) : Int(m);
    int chi = kronecker(chi_arg, Int(ell));
    Rational inner = g.coeff(m);
    if (m % ell2 == 0) inner -= Rational(ellk) * g.coeff(m / ell2);
    pred.coeff(m) = Rational(1 - chi) * inner;
  }
  res.predicted = pred;
  res.agree = agree(res.via_definition, res.predicted);
  res.agree_raw = agree(res.via_raw_operator, res.predicted);
  return res;
}

ShimuraReport shimura_match(const EigenformHalf& g, const EigenformInt& f, long p_max) {
  ShimuraReport rep;
  for (long p = 2; p <= p_max; ++p) {
    if (!is_prime(Int(p))) continue;
    auto it = f.eigenvalues.find(p);
    if (it == f.eigenvalues.end())
      throw UsageError("shimura_match: eigenvalue a_" + std::to_string(p) + " not available");
    QExpansion lhs = hecke_half_T2(p, g.k, g.q);
    QExpansion rhs = Rational(it->second) * g.q;
    if (!agree(lhs, rhs))
      throw MathError("shimura_match: operator at p=" + std::to_string(p) +
                      " does not act by a_p; pairing or precision is wrong");
    rep.verified_primes.push_back(p);
  }
  return rep;
}

EigenformHalf plus_eigenform(long k, long precision, long p_max) {
  std::vector<QExpansion> basis = plus_cusp_space(k, precision);
  if (basis.size() != 1)
    throw CapabilityError("plus_eigenform: plus space has dimension " +
                          std::to_string(basis.size()) + ", need 1");
  EigenformHalf g;
  g.k = k;
  g.q = basis[0];
  g.matched = level1_eigenform(2 * k, std::max<long>(p_max + 2, 20));
  shimura_match(g, g.matched, p_max);
  return g;
}

NewformPlusTable synthetic_plus_table(long k, long p, int eps,
                                      const std::map<Int, Rational>& X, long m_max) {
  if (eps != 1 && eps != -1) throw UsageError("synthetic_plus_table: sign must be +-1");
  NewformPlusTable t;
  t.k = k;
  t.p = p;
  t.eps = eps;
  t.m_max = m_max;
  Rational mult = Rational(eps) * Rational(pow_int(Int(p), static_cast<unsigned long>(k - 1)));
  for (long m = 1; m <= m_max; ++m) {
    long j = 0;
    long u = m;
    while (u % (p * p) == 0) {
      u /= p * p;
      ++j;
    }
    Rational x(0);
    auto it = X.find(Int(u));
    if (it != X.end()) x = it->second;
    Rational u_signed = (k % 2) ? Rational(-u) : Rational(u);
    if (psi_p_of(u_signed, p) == eps) x = 0;  // forced vanishing class
    Rational v = x;
    for (long i = 0; i < j; ++i) v *= mult;
    if (v != 0) t.coeffs[Int(m)] = v;
  }
  return t;
}

PlusVanishingReport plus_vanishing_criterion(const NewformPlusTable& table, long p, int eps,
                                             const Int& m_max) {
  if (eps != 1 && eps != -1) throw UsageError("plus_vanishing_criterion: sign must be +-1");
  Int need = m_max * p * p;
  if (Int(table.m_max) < need)
    throw UsageError("plus_vanishing_criterion: table too short (need coefficients to " +
                     need.get_str() + ")");
  auto cval = [&table](const Int& m) {
    auto it = table.coeffs.find(m);
    return it == table.coeffs.end() ? Rational(0) : it->second;
  };
  PlusVanishingReport rep;
  rep.vanishing_holds = true;
  rep.eigen_holds = true;
  for (Int m(1); m <= Int(table.m_max); ++m) {
    Rational m_signed = (table.k % 2) ? Rational(-m) : Rational(m);
    if (psi_p_of(m_signed, p) == eps && cval(m) != 0) {
      rep.vanishing_holds = false;
      rep.witness_vanishing = m;
      break;
    }
  }
  Rational mult = Rational(eps) * Rational(pow_int(Int(p), static_cast<unsigned long>(table.k - 1)));
  for (Int m(1); m <= m_max; ++m) {
    if (cval(m * p * p) != mult * cval(m)) {
      rep.eigen_holds = false;
      rep.witness_eigen = m;
      break;
    }
  }
  return rep;
}

}  // namespace ml
