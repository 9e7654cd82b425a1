#include "maasslift/siegel.hpp"

#include <algorithm>

#include "maasslift/capability.hpp"
#include "maasslift/parallel.hpp"

namespace ml {

namespace {

long pow_long(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Valuation of |x| at p, capped at cap; x = 0 counts as the cap.
long val_capped(long x, long p, long cap) {
  if (x == 0) return cap;
  if (x < 0) x = -x;
  long v = 0;
  while (v < cap && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// Reduce sum_t counts[t] zeta^t (zeta a primitive p^J-th root of unity)
// to a rational integer, verifying on the way that the sum really is
// Galois-stable; any nonconstant remainder indicates a bug upstream.
Int cyclotomic_reduce(std::vector<long> c, long p, long J, const char* who) {
  long q = pow_long(p, J);
  if (static_cast<long>(c.size()) != q) throw MathError(std::string(who) + ": bad table size");
  long step = q / p;              // p^{J-1}
  long d = (p - 1) * step;        // degree of the p^J-th cyclotomic polynomial
  for (long e = q - 1; e >= d; --e) {
    long co = c[static_cast<size_t>(e)];
    if (co == 0) continue;
    c[static_cast<size_t>(e)] = 0;
    long base = e - d;
    for (long i = 0; i < p - 1; ++i) c[static_cast<size_t>(base + i * step)] -= co;
  }
  for (long e = 1; e < d; ++e)
    if (c[static_cast<size_t>(e)] != 0)
      throw MathError(std::string(who) + ": character sum not rational (slice not Galois-stable)");
  return Int(c[0]);
}

// ---- size 2: full enumeration of symmetric matrices modulo p^J --------

std::vector<Int> bruteforce_size2(const HalfIntegralForm& h, long p, long J) {
  if (J == 0) return {Int(1)};
  long q = pow_long(p, J);
  Int qz(q);
  long th0 = to_long(((h.t(0, 0) / 2) % qz + qz) % qz);
  long th1 = to_long((h.t(0, 1) % qz + qz) % qz);
  long th2 = to_long(((h.t(1, 1) / 2) % qz + qz) % qz);

  using Counts = std::vector<std::vector<long>>;  // [s][t]
  Counts total(static_cast<size_t>(2 * J + 1), std::vector<long>(static_cast<size_t>(q), 0));
  auto per_task = [&](long a) {
    Counts cnt(static_cast<size_t>(2 * J + 1), std::vector<long>(static_cast<size_t>(q), 0));
    long va = val_capped(a, p, J);
    long ta = th0 * a % q;
    for (long b = 0; b < q; ++b) {
      long vb = val_capped(b, p, J);
      long vab = std::min(va, vb);
      long tab = (ta + th1 * b) % q;
      long bb = b * b;
      for (long cc = 0; cc < q; ++cc) {
        long c1 = std::min(vab, val_capped(cc, p, J));
        long det = a * cc - bb;
        long c2 = det == 0 ? J : std::min(J, val_capped(det, p, 2 * J) - c1);
        long s = 2 * J - c1 - c2;
        long t = (tab + th2 * cc) % q;
        ++cnt[static_cast<size_t>(s)][static_cast<size_t>(t)];
      }
    }
    return cnt;
  };
  parallel_tasks<Counts>(q, total, per_task, [](Counts& acc, const Counts& r) {
    for (size_t s = 0; s < acc.size(); ++s)
      for (size_t t = 0; t < acc[s].size(); ++t) acc[s][t] += r[s][t];
  });

  std::vector<Int> out;
  for (long s = 0; s <= J; ++s)
    out.push_back(cyclotomic_reduce(total[static_cast<size_t>(s)], p, J, "siegel_bruteforce"));
  return out;
}

// ---- size 4: rank-structured closed forms ----------------------------

// Representatives of the lines of F_p^m: leading coordinate 1, zeros
// before it, free digits after.
template <typename Fn>
void for_each_line(long m, long p, Fn&& fn) {
  std::vector<long> x(static_cast<size_t>(m), 0);
  for (long lead = 0; lead < m; ++lead) {
    std::fill(x.begin(), x.end(), 0L);
    x[static_cast<size_t>(lead)] = 1;
    long nfree = m - lead - 1;
    long total = pow_long(p, nfree);
    for (long idx = 0; idx < total; ++idx) {
      long t = idx;
      for (long i = 0; i < nfree; ++i) {
        x[static_cast<size_t>(lead + 1 + i)] = t % p;
        t /= p;
      }
      fn(x);
    }
  }
}

long form_value_mod(const HalfIntegralForm& h, const std::vector<long>& x, long mod) {
  // h[x] = T[x]/2 evaluated exactly in machine integers, then reduced.
  long m = h.m;
  long acc = 0;
  for (long i = 0; i < m; ++i) {
    if (!x[static_cast<size_t>(i)]) continue;
    for (long j = 0; j < m; ++j)
      acc += to_long(h.t(i, j)) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)];
  }
  acc /= 2;
  return ((acc % mod) + mod) % mod;
}

// Character sum over rank-1 symmetric matrices modulo p:
// sum over lines [v] and units u of e(u h[v] / p).
Int rank1_sum(const HalfIntegralForm& h, long p) {
  long lines = 0, zeros = 0;
  for_each_line(h.m, p, [&](const std::vector<long>& x) {
    ++lines;
    if (form_value_mod(h, x, p) == 0) ++zeros;
  });
  return Int(p) * zeros - lines;
}

long rank_mod_p(std::vector<std::vector<long>> a, long p) {
  size_t n = a.size();
  auto inv_mod = [p](long x) {
    long r = 1, b = x % p, e = p - 2;
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  size_t rank = 0;
  for (size_t c = 0; c < n && rank < n; ++c) {
    size_t piv = rank;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(a[piv], a[rank]);
    long inv = inv_mod(a[rank][c]);
    for (size_t j = 0; j < n; ++j) a[rank][j] = a[rank][j] * inv % p;
    for (size_t i = 0; i < n; ++i) {
      if (i == rank || a[i][c] == 0) continue;
      long f = a[i][c];
      for (size_t j = 0; j < n; ++j) a[i][j] = ((a[i][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return static_cast<long>(rank);
}

// One pass over all of Sym_4(F_p): character sums of the rank-1 and
// rank-2 slices (the former cross-checks rank1_sum).
void sym4_slice_sums(const HalfIntegralForm& h, long p, Int& rank1, Int& rank2) {
  long m = h.m;
  std::vector<long> hd(static_cast<size_t>(m));
  std::vector<std::vector<long>> tl(static_cast<size_t>(m), std::vector<long>(static_cast<size_t>(m)));
  for (long i = 0; i < m; ++i) {
    hd[static_cast<size_t>(i)] = ((to_long(h.t(i, i)) / 2) % p + p) % p;
    for (long j = 0; j < m; ++j)
      tl[static_cast<size_t>(i)][static_cast<size_t>(j)] = ((to_long(h.t(i, j))) % p + p) % p;
  }
  long npairs = m * (m - 1) / 2;
  long total = pow_long(p, m + npairs);
  std::vector<long> cnt1(static_cast<size_t>(p), 0), cnt2(static_cast<size_t>(p), 0);
  std::vector<std::vector<long>> A(static_cast<size_t>(m), std::vector<long>(static_cast<size_t>(m)));
  for (long idx = 0; idx < total; ++idx) {
    long t = idx;
    long tr = 0;
    for (long i = 0; i < m; ++i) {
      long d = t % p;
      t /= p;
      A[static_cast<size_t>(i)][static_cast<size_t>(i)] = d;
      tr += hd[static_cast<size_t>(i)] * d;
    }
    for (long i = 0; i < m; ++i)
      for (long j = i + 1; j < m; ++j) {
        long d = t % p;
        t /= p;
        A[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
        A[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
        tr += tl[static_cast<size_t>(i)][static_cast<size_t>(j)] * d;
      }
    long r = rank_mod_p(A, p);
    if (r == 1) ++cnt1[static_cast<size_t>(tr % p)];
    else if (r == 2) ++cnt2[static_cast<size_t>(tr % p)];
  }
  rank1 = cyclotomic_reduce(cnt1, p, 1, "sym4 rank-1 slice");
  rank2 = cyclotomic_reduce(cnt2, p, 1, "sym4 rank-2 slice");
}

// Ramanujan sum: sum over units u modulo p^2 of e(u w / p^2).
long ramanujan_p2(long w, long p) {
  if (w % (p * p) == 0) return p * p - p;
  if (w % p == 0) return -p;
  return 0;
}

// Character sum over classes alpha = c v v^t / p^2 (v primitive mod p^2,
// c a unit): normalized representatives have leading unit coordinate 1
// and earlier coordinates divisible by p.
Int denom_p2_rank1_sum(const HalfIntegralForm& h, long p) {
  long m = h.m;
  long p2 = p * p;
  Int acc(0);
  std::vector<long> v(static_cast<size_t>(m), 0);
  for (long lead = 0; lead < m; ++lead) {
    long nbefore = lead;
    long nafter = m - lead - 1;
    long nb = pow_long(p, nbefore);        // digits: multiples of p
    long na = pow_long(p2, nafter);        // free modulo p^2
    for (long ib = 0; ib < nb; ++ib) {
      long t = ib;
      for (long i = 0; i < nbefore; ++i) {
        v[static_cast<size_t>(i)] = (t % p) * p;
        t /= p;
      }
      v[static_cast<size_t>(lead)] = 1;
      for (long ia = 0; ia < na; ++ia) {
        long u = ia;
        for (long i = 0; i < nafter; ++i) {
          v[static_cast<size_t>(lead + 1 + i)] = u % p2;
          u /= p2;
        }
        acc += ramanujan_p2(form_value_mod(h, v, p2), p);
      }
    }
  }
  return acc;
}

std::vector<Int> bruteforce_size4(const HalfIntegralForm& h, long p, long J) {
  if (J == 0) return {Int(1)};
  std::vector<Int> out{Int(1)};
  Int b1 = rank1_sum(h, p);
  Int rank2_sum(0);
  if (p <= 3) {
    Int b1_direct(0);
    sym4_slice_sums(h, p, b1_direct, rank2_sum);
    if (b1_direct != b1)
      throw MathError("size-4 enumeration: closed form disagrees with direct scan");
  }
  out.push_back(b1);
  if (J >= 2) {
    if (p > 3)
      throw CapabilityError("size-4 depth 2 requires p <= 3");
    out.push_back(denom_p2_rank1_sum(h, p) + rank2_sum);
  }
  return out;
}

}  // namespace

// ----------------------------------------------------------------------

Int nu(const MatrixQ& alpha) {
  if (alpha.rows != alpha.cols) throw UsageError("nu: not square");
  long n = alpha.rows;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (alpha.at(i, j) != alpha.at(j, i)) throw UsageError("nu: not symmetric");
  // Least common denominator must be a prime power.
  Int L(1);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Int den = alpha.at(i, j).get_den();
      L = L / gcd(L, den) * den;
    }
  if (L == 1) return Int(1);
  auto fac = factor(L);
  if (fac.size() != 1) throw UsageError("nu: denominators not a single prime power");
  Int p = fac[0].first;
  long mexp = fac[0].second;
  Int scale = pow_int(p, static_cast<unsigned long>(mexp));
  IntMat A(static_cast<size_t>(n), IntVec(static_cast<size_t>(n)));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Rational x = alpha.at(i, j) * Rational(scale);
      if (x.get_den() != 1) throw MathError("nu: scaling failed");
      A[static_cast<size_t>(i)][static_cast<size_t>(j)] = x.get_num();
    }
  std::vector<long> ev = smith_valuations(A, p);
  long sum = 0;
  for (long e : ev) {
    long capped = (e < 0 || e > mexp) ? mexp : e;  // -1 marks +infinity
    sum += mexp - capped;
  }
  return pow_int(p, static_cast<unsigned long>(sum));
}

std::vector<Int> siegel_bruteforce(const HalfIntegralForm& h, long p, long j_max) {
  if (h.m != 2 && h.m != 4) throw UsageError("siegel_bruteforce: size must be 2 or 4");
  if (j_max < 0) throw UsageError("siegel_bruteforce: negative depth");
  if (!is_prime(Int(p))) throw UsageError("siegel_bruteforce: p not prime");
  require_capability(h.m, p, j_max);
  return h.m == 2 ? bruteforce_size2(h, p, j_max) : bruteforce_size4(h, p, j_max);
}

namespace {

std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b) {
  std::vector<Int> c(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

std::vector<Int> poly_divexact(const std::vector<Int>& num, const std::vector<Int>& den,
                               const char* who) {
  if (den.empty() || den[0] == 0) throw UsageError(std::string(who) + ": bad divisor");
  std::vector<Int> rem = num;
  std::vector<Int> q(num.size() >= den.size() ? num.size() - den.size() + 1 : 1, Int(0));
  for (size_t i = 0; i + den.size() <= rem.size(); ++i) {
    Int c = rem[i];
    if (c % den[0] != 0) throw MathError(std::string(who) + ": division not exact");
    c /= den[0];
    q[i] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < den.size(); ++j) rem[i + j] -= c * den[j];
  }
  for (const Int& r : rem)
    if (r != 0) throw MathError(std::string(who) + ": division leaves a remainder");
  while (q.size() > 1 && q.back() == 0) q.pop_back();
  return q;
}

}  // namespace

GammaData gamma_poly(long n, const HalfIntegralForm& h, long p) {
  if (h.m != 2 * n) throw UsageError("gamma_poly: size of h must be 2n");
  Int D = D_of(h);
  GammaData g;
  g.chi = psi_p(D, n, p);
  g.num = {Int(1), Int(-1)};  // 1 - X
  for (long j = 1; j <= n; ++j) {
    // j-th quadratic factor: 1 - p^{2j} X^2
    Int p2j = pow_int(Int(p), static_cast<unsigned long>(2 * j));
    g.num = poly_mul(g.num, {Int(1), Int(0), -p2j});
  }
  g.den = g.chi == 0 ? std::vector<Int>{Int(1)}
                     : std::vector<Int>{Int(1), -Int(g.chi) * pow_int(Int(p), static_cast<unsigned long>(n))};
  g.reduced = poly_divexact(g.num, g.den, "gamma_poly");
  return g;
}

LocalSiegelData local_siegel_data(const HalfIntegralForm& h, long p) {
  LocalSiegelData d;
  d.h = h;
  d.p = p;
  if (h.m % 2 != 0) throw UsageError("local_siegel_data: size must be even");
  d.n = h.m / 2;
  Int D = D_of(h);
  d.fp = f_p_of(D, d.n, p);
  d.jmax = bruteforce_depth(h.m, p, d.fp);
  d.b = siegel_bruteforce(h, p, d.jmax);
  d.gamma = gamma_poly(d.n, h, p);
  const std::vector<Int>& g = d.gamma.reduced;
  if (g.empty() || g[0] != 1) throw MathError("local_siegel_data: gamma not monic at 0");
  if (d.b.empty() || d.b[0] != 1) throw MathError("local_siegel_data: b_0 != 1");
  if (d.jmax < d.fp) throw MathError("local_siegel_data: not enough exact coefficients");

  // Leading half of F by back-substitution through b = gamma * F.
  std::vector<Int> F(static_cast<size_t>(2 * d.fp) + 1, Int(0));
  F[0] = 1;
  for (long j = 1; j <= d.fp; ++j) {
    Int c = d.b[static_cast<size_t>(j)];
    for (long i = 1; i <= j && i < static_cast<long>(g.size()); ++i)
      c -= g[static_cast<size_t>(i)] * F[static_cast<size_t>(j - i)];
    F[static_cast<size_t>(j)] = c;
  }
  // Trailing half forced by the functional equation of Ftilde.
  Int pp = pow_int(Int(p), static_cast<unsigned long>(2 * d.n + 1));
  Int scale(1);
  for (long j = 1; j <= d.fp; ++j) {
    scale *= pp;
    F[static_cast<size_t>(d.fp + j)] = scale * F[static_cast<size_t>(d.fp - j)];
  }
  d.F = F;

  // Every exactly computed coefficient must match the product.
  std::vector<Int> prod = poly_mul(g, F);
  for (long j = 0; j <= d.jmax; ++j) {
    Int lhs = j < static_cast<long>(prod.size()) ? prod[static_cast<size_t>(j)] : Int(0);
    if (lhs != d.b[static_cast<size_t>(j)])
      throw MathError("local_siegel_data: gamma*F mismatch at t^" + std::to_string(j) +
                      " for p=" + std::to_string(p) + ", form " + encode_form(h));
  }

  // Normalized series over Q(sqrt p).
  LaurentPolyQuad ft(p);
  for (long j = 0; j <= 2 * d.fp; ++j) {
    if (F[static_cast<size_t>(j)] == 0) continue;
    QuadExt c = Rational(F[static_cast<size_t>(j)]) *
                sqrtp_power(p, -(2 * d.n + 1) * j);
    ft.set_coeff(j - d.fp, c);
  }
  if (!(ft == invert_variable(ft)))
    throw MathError("local_siegel_data: functional equation fails for p=" + std::to_string(p) +
                    ", form " + encode_form(h));
  d.Ftilde = ft;
  return d;
}

std::vector<Int> F_poly(const HalfIntegralForm& h, long p) { return local_siegel_data(h, p).F; }

LaurentPolyQuad F_tilde(const HalfIntegralForm& h, long p) {
  return local_siegel_data(h, p).Ftilde;
}

}  // namespace ml
