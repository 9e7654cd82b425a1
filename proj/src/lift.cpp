#include "maasslift/lift.hpp"

#include "maasslift/parallel.hpp"

#include <algorithm>
#include <iostream>
#include <set>

namespace ml {

namespace {

// 1 + p + ... + p^e; zero for e < 0.
Int geom_sum(long p, long e) {
  if (e < 0) return Int(0);
  return (pow_int(Int(p), static_cast<unsigned long>(e + 1)) - 1) / Int(p - 1);
}

Rational qexp_at(const QExpansion& q, const Int& idx, const char* who) {
  if (idx < 0) throw UsageError(std::string(who) + ": negative coefficient index");
  if (idx >= q.prec)
    throw UsageError(std::string(who) + ": expansion too short for coefficient index " +
                     idx.get_str());
  return q.coeff(to_long(idx));
}

// Visits every key (a, w) with |w_i| <= wrange and 0 < D(a, w) <= bound,
// in ascending odometer-then-a order.  D(a, w) = 2 a det S - adj(S)[w].
template <typename Fn>
void for_each_border_key(const EvenLattice& S, const Int& bound, long wrange, Fn&& fn) {
  long m = S.size;
  IntMat adj = adjugate(S.S);
  Int two_d = 2 * det_mat(S.S);
  std::vector<long> idx(static_cast<size_t>(m), -wrange);
  IntVec w(static_cast<size_t>(m));
  for (;;) {
    for (long i = 0; i < m; ++i) w[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)];
    Int q = eval_form(adj, w);
    Int a_min = q / two_d + 1;
    Int a_max = (bound + q) / two_d;
    for (Int a = a_min; a <= a_max; ++a) fn(a, w, two_d * a - q);
    long i = 0;
    while (i < m && idx[static_cast<size_t>(i)] == wrange) {
      idx[static_cast<size_t>(i)] = -wrange;
      ++i;
    }
    if (i == m) break;
    ++idx[static_cast<size_t>(i)];
  }
}

long parity_of(long k) { return ((k % 2) + 2) % 2; }

// Resolves arbitrary forms against a table's stored classes by isometry
// invariants (determinant, then small representation counts) followed by an
// exact isometry test against the few bucket members.  Bulk scans over
// bordered forms use this instead of reducing every query, which would
// re-enumerate a candidate box per lookup.
class ClassResolver {
 public:
  explicit ClassResolver(const CoefficientTable& table) : table_(&table) {
    for (const HalfIntegralForm& h : table.classes)
      buckets_[bucket_key(h)].emplace_back(&h, &table.entries.at(encode_form(h)));
  }

  Rational value(const HalfIntegralForm& h) const {
    std::string enc = encode_form(h);
    auto mit = memo_.find(enc);
    if (mit != memo_.end()) return mit->second;
    auto it = buckets_.find(bucket_key(h));
    if (it != buckets_.end())
      for (const auto& [rep, val] : it->second)
        if (isometric(h, *rep)) {
          memo_.emplace(std::move(enc), *val);
          return *val;
        }
    // Fall through for the standard missing-class diagnostic.
    return table_->value(h);
  }

 private:
  static std::pair<std::string, std::vector<long>> bucket_key(const HalfIntegralForm& h) {
    // A shallow profile keeps the per-query invariant cheap; the exact
    // isometry test settles any collisions left within a bucket.
    return {det_mat(h.T).get_str(), repr_counts(h.T, 2)};
  }

  const CoefficientTable* table_;
  std::map<std::pair<std::string, std::vector<long>>,
           std::vector<std::pair<const HalfIntegralForm*, const Rational*>>>
      buckets_;
  mutable std::map<std::string, Rational> memo_;
};

// Flips w to -w when its first nonzero coordinate is negative; the two signs
// give isometric bordered forms, so normalizing lets repeated lookups share
// one resolution.
IntVec sign_normalized(const IntVec& w) {
  for (const Int& x : w) {
    if (x > 0) return w;
    if (x < 0) {
      IntVec r(w.size());
      for (size_t i = 0; i < w.size(); ++i) r[i] = -w[i];
      return r;
    }
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------
// CoefficientTable / MaassParameter.
// ---------------------------------------------------------------------

bool CoefficientTable::has(const HalfIntegralForm& h) const {
  if (entries.count(encode_form(h)) != 0) return true;
  return entries.count(encode_form(canonical_reduce(h))) != 0;
}

Rational CoefficientTable::value(const HalfIntegralForm& h) const {
  // Stored representatives are already reduced, so most queries hit
  // directly; only genuinely unreduced forms pay for the reduction.
  auto it = entries.find(encode_form(h));
  if (it != entries.end()) return it->second;
  std::string key = encode_form(canonical_reduce(h));
  it = entries.find(key);
  if (it == entries.end())
    throw UsageError("coefficient table is missing class " + key);
  return it->second;
}

bool MaassParameter::admissible(const Int& m) const {
  return m > 0 && is_plus_exponent(k_parity, m);
}

Rational MaassParameter::at(const Int& m) const {
  if (!admissible(m))
    throw UsageError("parameter index " + m.get_str() + " is not admissible");
  if (m > M)
    throw UsageError("parameter does not cover index " + m.get_str());
  auto it = values.find(m);
  if (it == values.end())
    throw UsageError("parameter has a coverage gap at index " + m.get_str());
  return it->second;
}

Rational MaassParameter::at_or_zero(const Rational& x) const {
  if (x <= 0 || x.get_den() != 1) return Rational(0);
  Int m = x.get_num();
  if (!admissible(m)) return Rational(0);
  return at(m);
}

// ---------------------------------------------------------------------
// Lifted coefficients.
// ---------------------------------------------------------------------

Rational lift_coeff_A(const HalfIntegralForm& h, const EigenformHalf& g) {
  if (h.m % 2 != 0) throw UsageError("lift_coeff_A: class size must be even");
  long n = h.m / 2;
  long k = g.k;
  if (parity_of(k - n) != 0)
    throw UsageError("lift_coeff_A: weight parity must match the degree (k = n mod 2)");
  Int D = D_of(h);
  DiscriminantData dd = disc_split(D, n, "lift_coeff_A");
  Rational out = qexp_at(g.q, dd.d, "lift_coeff_A");
  for (const auto& [P, e] : factor(dd.f)) {
    long p = to_long(P);
    auto eig = g.matched.eigenvalues.find(p);
    if (eig == g.matched.eigenvalues.end())
      throw UsageError("lift_coeff_A: no eigenvalue available at p = " + std::to_string(p));
    std::vector<Rational> loc = phi_local(h, p);
    Rational factor_p(0);
    for (long j = 0; j < static_cast<long>(loc.size()); ++j) {
      Int scale = pow_int(Int(p), static_cast<unsigned long>((k - 1) * j));
      factor_p += loc[static_cast<size_t>(j)] * Rational(scale) *
                  Rational(lambda_int(p, D, n, j, k, eig->second));
    }
    if (factor_p.get_den() != 1)
      throw MathError("lift_coeff_A: local factor not integral at p = " + std::to_string(p) +
                      " for class " + encode_form(h));
    out *= factor_p;
  }
  return out;
}

Rational lift_coeff_B(const HalfIntegralForm& h, const EigenformHalf& g) {
  if (h.m % 2 != 0) throw UsageError("lift_coeff_B: class size must be even");
  long n = h.m / 2;
  long k = g.k;
  if (parity_of(k - n) != 0)
    throw UsageError("lift_coeff_B: weight parity must match the degree (k = n mod 2)");
  Int D = D_of(h);
  PhiTable pt = phi_table(h);
  Rational out(0);
  for (const auto& [d, ph] : pt.entries) {
    Int idx = D / (d * d);
    out += Rational(pow_int(d, static_cast<unsigned long>(k - 1)) * ph) *
           qexp_at(g.q, idx, "lift_coeff_B");
  }
  return out;
}

CoefficientTable build_lift_table(const EigenformHalf& g, long two_n, const Int& dmax) {
  CoefficientTable t;
  t.two_n = two_n;
  t.k = g.k;
  t.dmax = dmax;
  t.classes = enumerate_forms(two_n, dmax);
  using Chunk = std::map<std::string, Rational>;
  parallel_tasks<Chunk>(
      static_cast<long>(t.classes.size()), t.entries,
      [&](long i) -> Chunk {
        const HalfIntegralForm& h = t.classes[static_cast<size_t>(i)];
        return {{encode_form(h), lift_coeff_B(h, g)}};
      },
      [](Chunk& acc, Chunk& part) { acc.merge(part); });
  return t;
}

// ---------------------------------------------------------------------
// Relation system.
// ---------------------------------------------------------------------

MaassVerifyReport maass_verify(const CoefficientTable& table, const MaassParameter& c, long k) {
  if (parity_of(k) != c.k_parity)
    throw UsageError("maass_verify: parameter parity does not match k");
  MaassVerifyReport rep;
  for (const HalfIntegralForm& h : table.classes) {
    Int D = D_of(h);
    PhiTable pt = phi_table(h);
    Rational rhs(0);
    for (const auto& [d, ph] : pt.entries)
      rhs += Rational(pow_int(d, static_cast<unsigned long>(k - 1)) * ph) * c.at(D / (d * d));
    ++rep.checked;
    if (rhs != table.value(h)) {
      rep.all_hold = false;
      rep.failing.push_back(encode_form(h));
    }
  }
  return rep;
}

MaassSolveResult maass_solve(const CoefficientTable& table, long k, const Int& M) {
  MaassSolveResult res;
  long parity = parity_of(k);
  std::map<Int, long> col_of;
  for (Int m = 1; m <= M; ++m)
    if (is_plus_exponent(parity, m)) {
      long col = static_cast<long>(res.domain.size());
      col_of[m] = col;
      res.domain.push_back(m);
    }
  std::vector<const HalfIntegralForm*> used;
  for (const HalfIntegralForm& h : table.classes)
    if (D_of(h) <= M) used.push_back(&h);
  MatrixQ A(static_cast<long>(used.size()), static_cast<long>(res.domain.size()));
  std::vector<Rational> b(used.size(), Rational(0));
  for (long r = 0; r < static_cast<long>(used.size()); ++r) {
    const HalfIntegralForm& h = *used[static_cast<size_t>(r)];
    Int D = D_of(h);
    PhiTable pt = phi_table(h);
    for (const auto& [d, ph] : pt.entries) {
      Int m = D / (d * d);
      A.at(r, col_of.at(m)) +=
          Rational(pow_int(d, static_cast<unsigned long>(k - 1)) * ph);
    }
    b[static_cast<size_t>(r)] = table.value(h);
  }
  LinearSolution sol = solve_linear(A, b);
  res.consistent = sol.consistent;
  res.equations = static_cast<long>(used.size());
  if (sol.consistent) {
    res.particular.k_parity = parity;
    res.particular.M = M;
    for (size_t i = 0; i < res.domain.size(); ++i)
      res.particular.values[res.domain[i]] = sol.particular[i];
    for (const auto& vec : sol.kernel) {
      std::map<Int, Rational> km;
      for (size_t i = 0; i < res.domain.size(); ++i)
        if (vec[i] != 0) km[res.domain[i]] = vec[i];
      res.kernel.push_back(std::move(km));
    }
  }
  return res;
}

bool square_disc_sum_check(const HalfIntegralForm& h, long k) {
  if (h.m % 2 != 0) throw UsageError("square_disc_sum_check: class size must be even");
  long n = h.m / 2;
  if (n % 4 != 2)
    throw UsageError("square_disc_sum_check: defined only for n = 2 mod 4");
  DiscriminantData dd = disc_split(D_of(h), n, "square_disc_sum_check");
  if (dd.d != 1)
    throw UsageError("square_disc_sum_check: discriminant must be a perfect square");
  PhiTable pt = phi_table(h);
  Int sum(0);
  for (const auto& [d, ph] : pt.entries)
    sum += pow_int(d, static_cast<unsigned long>(k - 1)) * ph *
           pow_int(dd.f / d, static_cast<unsigned long>(k));
  return sum == 0;
}

// ---------------------------------------------------------------------
// Jacobi tables.
// ---------------------------------------------------------------------

Int JacobiTable::disc_key(const Int& a, const IntVec& w) const {
  return border_disc(S, a, w);
}

long jacobi_wrange(const Int& bound) { return to_long(isqrt(bound)) + 1; }

JacobiTable fj_extract(const CoefficientTable& table, const EvenLattice& S) {
  if (S.size + 1 != table.two_n)
    throw UsageError("fj_extract: index size must be one less than the class size");
  JacobiTable jt;
  jt.S = S;
  jt.bound = table.dmax;
  jt.wrange = jacobi_wrange(jt.bound);
  HalfIntegralForm B = make_form(S.S);  // S/2 as a half-integral form
  ClassResolver resolver(table);
  for_each_border_key(S, jt.bound, jt.wrange, [&](const Int& a, const IntVec& w, const Int&) {
    jt.entries[{a, w}] = resolver.value(border(B, a, sign_normalized(w)));
  });
  return jt;
}

MTypeReport mtype_check(const JacobiTable& jt) {
  MTypeReport rep;
  std::map<Int, std::pair<std::pair<Int, IntVec>, Rational>> seen;
  for (const auto& [key, val] : jt.entries) {
    Int D = jt.disc_key(key.first, key.second);
    auto it = seen.find(D);
    if (it == seen.end()) {
      seen.emplace(D, std::make_pair(key, val));
      rep.C[D] = val;
    } else if (it->second.second != val && rep.is_mtype) {
      rep.is_mtype = false;
      rep.key1 = it->second.first;
      rep.key2 = key;
    }
  }
  return rep;
}

JacobiTable index2_jacobi_table(const EigenformHalf& g, const EvenLattice& S, const Int& bound) {
  if (det_mat(S.S) != 2)
    throw UsageError("index2_jacobi_table: index determinant must be 2");
  if (!is_maximal(S)) throw UsageError("index2_jacobi_table: index must be maximal");
  JacobiTable jt;
  jt.S = S;
  jt.bound = bound;
  jt.wrange = jacobi_wrange(bound);
  for_each_border_key(S, bound, jt.wrange, [&](const Int& a, const IntVec& w, const Int& D) {
    jt.entries[{a, w}] = qexp_at(g.q, D, "index2_jacobi_table");
  });
  return jt;
}

Rational jacobi_product_coeff(const EvenLattice& S, const EigenformHalf& g,
                              const EigenformInt& f, const Int& a, const IntVec& w) {
  if (!is_maximal(S)) throw UsageError("jacobi_product_coeff: index must be maximal");
  if (!primes_radical(S, 1).empty() || !primes_radical(S, 2).empty())
    throw CapabilityError(
        "jacobi_product_coeff: index has radical primes; only the trivial-level "
        "construction is supported");
  long n = (S.size + 1) / 2;
  long k = g.k;
  if (parity_of(k - n) != 0)
    throw UsageError("jacobi_product_coeff: weight parity must match the index size");
  Int D = border_disc(S, a, w);
  if (D <= 0) throw UsageError("jacobi_product_coeff: pair outside the positive cone");
  DiscriminantData dd = disc_split(D, n, "jacobi_product_coeff");
  Rational out = qexp_at(g.q, dd.d, "jacobi_product_coeff");
  for (const auto& [P, e] : factor(dd.f)) {
    long p = to_long(P);
    auto eig = f.eigenvalues.find(p);
    if (eig == f.eigenvalues.end())
      throw UsageError("jacobi_product_coeff: no eigenvalue available at p = " +
                       std::to_string(p));
    out *= Rational(lambda_int(p, D, n, 0, k, eig->second));
  }
  return out;
}

JacobiTable pair_jacobi_table(const HalfIntegralForm& B, const EigenformHalf& g,
                              const NewformPlusTable* h, const Int& bound) {
  if (B.m % 2 != 1) throw UsageError("pair_jacobi_table: index size must be odd");
  Int DB = D_of(B);
  if (!is_prime(DB))
    throw UsageError("pair_jacobi_table: index discriminant must be prime");
  long p = to_long(DB);
  long n = (B.m + 1) / 2;
  long k = g.k;
  if (parity_of(k - n) != 0)
    throw UsageError("pair_jacobi_table: weight parity must match the index size");
  if (n % 4 != 2 && n % 4 != 3)
    std::cerr << "warning: pair_jacobi_table is faithful only for n = 2,3 mod 4 (n = " << n
              << ")\n";
  if (h != nullptr && (h->p != p || h->k != k))
    throw UsageError("pair_jacobi_table: companion table is for a different (k, p)");
  EvenLattice S = make_even_lattice(B.T);
  JacobiTable jt;
  jt.S = S;
  jt.bound = bound;
  jt.wrange = jacobi_wrange(bound);
  Int p2 = Int(p) * Int(p);
  Int pk = pow_int(Int(p), static_cast<unsigned long>(k));
  for_each_border_key(S, bound, jt.wrange, [&](const Int& a, const IntVec& w, const Int& D) {
    Rational val = qexp_at(g.q, D, "pair_jacobi_table");
    if (D % p2 == 0) val -= Rational(pk) * qexp_at(g.q, D / p2, "pair_jacobi_table");
    if (h != nullptr) {
      if (Int(h->m_max) < D)
        throw UsageError("pair_jacobi_table: companion table does not cover index " +
                         D.get_str());
      auto it = h->coeffs.find(D);
      Rational ch = (it == h->coeffs.end()) ? Rational(0) : it->second;
      if (ch != 0) {
        long fp = f_p_of(D, k, p);
        int psi = psi_p(D, k, p);
        // p^{f/2} (lambda_{p,D}(p^{-1/2}) - p^{1/2} lambda_{p,p^{-2}D}(p^{-1/2}))
        // collapses to an integer combination of geometric sums.
        Int lam = geom_sum(p, fp) - Int(psi) * geom_sum(p, fp - 1) -
                  Int(p) * geom_sum(p, fp - 1) + Int(p) * Int(psi) * geom_sum(p, fp - 2);
        Rational term = ch * Rational(lam);
        if (psi != 0) term /= 2;  // the 2^{-b_p(D)} factor with b_p(D) = 1
        val += term;
      }
    }
    jt.entries[{a, w}] = val;
  });
  return jt;
}

BorderReachResult border_reach(const HalfIntegralForm& B, const Int& m, long search_bound) {
  if (B.m % 2 != 1) throw UsageError("border_reach: index size must be odd");
  Int DB = D_of(B);
  if (!is_prime(DB)) throw UsageError("border_reach: index discriminant must be prime");
  long n = (B.m + 1) / 2;
  BorderReachResult res;
  if (m > 0 && is_disc_value(m, n)) {
    Int arg = (n % 2 == 0) ? m : Int(-m);
    int banned = (n % 4 == 0 || n % 4 == 1) ? -1 : 1;
    res.criterion = kronecker(arg, DB) != banned;
  }
  EvenLattice S = make_even_lattice(B.T);
  IntMat adj = adjugate(S.S);
  Int two_d = 2 * det_mat(S.S);
  // A witness (a, w) satisfies adj(S)[w] = 2a det S - m, so one pass over
  // the w box for the largest admissible target covers every a at once:
  // each w yields at most one candidate a = (adj(S)[w] + m) / (2 det S).
  // Since adj(S)^{-1} = S / det S, each coordinate obeys
  // w_i^2 <= t_max * S_ii / det S.
  Int tmax = two_d * search_bound - m;
  if (tmax >= 0) {
    long msize = B.m;
    std::vector<long> bnd(static_cast<size_t>(msize));
    for (long i = 0; i < msize; ++i)
      bnd[static_cast<size_t>(i)] = to_long(
          isqrt(tmax * B.T[static_cast<size_t>(i)][static_cast<size_t>(i)] / (two_d / 2)));
    std::vector<long> idx(static_cast<size_t>(msize));
    for (long i = 0; i < msize; ++i) idx[static_cast<size_t>(i)] = -bnd[static_cast<size_t>(i)];
    IntVec w(static_cast<size_t>(msize));
    for (;;) {
      for (long i = 0; i < msize; ++i) w[static_cast<size_t>(i)] = idx[static_cast<size_t>(i)];
      Int q = eval_form(adj, w) + m;
      if (q > 0 && q % two_d == 0) {
        Int a = q / two_d;
        if (a >= 1 && a <= search_bound) {
          res.witness_found = true;
          res.a = a;
          res.w = w;
          break;
        }
      }
      long i = 0;
      while (i < msize && idx[static_cast<size_t>(i)] == bnd[static_cast<size_t>(i)]) {
        idx[static_cast<size_t>(i)] = -bnd[static_cast<size_t>(i)];
        ++i;
      }
      if (i == msize) break;
      ++idx[static_cast<size_t>(i)];
    }
  }
  return res;
}

BorderRecursionReport border_recursion_check(const CoefficientTable& table,
                                             const HalfIntegralForm& B,
                                             const MaassParameter& c, long k) {
  if (B.m % 2 != 1)
    throw UsageError("border_recursion_check: index size must be odd");
  if (B.m + 1 != table.two_n)
    throw UsageError("border_recursion_check: index size must be one less than the class size");
  Int DB = D_of(B);
  if (!is_prime(DB))
    throw UsageError("border_recursion_check: index discriminant must be prime");
  long p = to_long(DB);
  BorderRecursionReport rep;
  rep.precondition_ok = maass_verify(table, c, k).all_hold;
  EvenLattice S = make_even_lattice(B.T);
  Int s(-eta(S, p));
  Int p2 = Int(p) * Int(p);
  Int pk = pow_int(Int(p), static_cast<unsigned long>(k));
  Int bound = table.dmax < c.M ? table.dmax : c.M;
  ClassResolver resolver(table);
  for_each_border_key(S, bound, jacobi_wrange(bound),
                      [&](const Int& a, const IntVec& w, const Int& D) {
                        HalfIntegralForm bord = border(B, a, sign_normalized(w));
                        Rational lhs = resolver.value(bord);
                        Rational quot(D);
                        quot /= p2;
                        Rational rhs = c.at(D) - Rational(s * pk) * c.at_or_zero(quot);
                        ++rep.checked;
                        if (lhs != rhs && rep.all_hold) {
                          rep.all_hold = false;
                          rep.witness = encode_form(canonical_reduce(bord));
                        }
                      });
  return rep;
}

DiscScanResult disc_scan(long n, const Int& bound) {
  if (n != 1 && n != 2) throw UsageError("disc_scan: degree must be 2 or 4");
  DiscScanResult res;
  std::set<Int> got;
  for (const HalfIntegralForm& h : enumerate_forms(2 * n, bound)) got.insert(D_of(h));
  res.achieved.assign(got.begin(), got.end());
  for (Int m = 1; m <= bound; ++m) {
    if (!is_disc_value(m, n)) continue;
    if (n % 4 == 2 && m == 1) continue;
    res.predicted.push_back(m);
  }
  res.match = res.achieved == res.predicted;
  return res;
}

EtaProductReport eta_sign_product_check(const HalfIntegralForm& B, bool flip_hasse_convention) {
  if (B.m % 2 != 1)
    throw UsageError("eta_sign_product_check: size must be odd");
  EtaProductReport rep;
  rep.disc = D_of(B);
  auto facs = factor(rep.disc);
  for (const auto& [P, e] : facs)
    if (e > 1)
      throw UsageError("eta_sign_product_check: discriminant must be squarefree");
  long n = (B.m + 1) / 2;
  rep.expected = (n % 4 == 0 || n % 4 == 1) ? 1 : -1;
  EvenLattice L = make_even_lattice(B.T);
  rep.product = 1;
  for (const auto& [P, e] : facs)
    rep.product *= eta_variant(L, to_long(P), /*hasse_include_equal=*/!flip_hasse_convention);
  rep.holds = rep.product == rep.expected;
  return rep;
}

}  // namespace ml
