#include "maasslift/quadform.hpp"

#include <algorithm>
#include <sstream>

namespace ml {

HalfIntegralForm make_form(const IntMat& T) {
  HalfIntegralForm h;
  h.m = static_cast<long>(T.size());
  if (h.m == 0) throw UsageError("make_form: empty matrix");
  for (const auto& row : T)
    if (static_cast<long>(row.size()) != h.m) throw UsageError("make_form: not square");
  for (long i = 0; i < h.m; ++i) {
    if (T[static_cast<size_t>(i)][static_cast<size_t>(i)] % 2 != 0)
      throw UsageError("make_form: doubled matrix must have even diagonal");
    for (long j = 0; j < h.m; ++j)
      if (T[static_cast<size_t>(i)][static_cast<size_t>(j)] !=
          T[static_cast<size_t>(j)][static_cast<size_t>(i)])
        throw UsageError("make_form: matrix not symmetric");
  }
  h.T = T;
  if (!is_positive_definite(T)) throw UsageError("make_form: not positive definite");
  return h;
}

std::string encode_form(const HalfIntegralForm& h) {
  std::string s;
  for (long i = 0; i < h.m; ++i) {
    if (i) s += ';';
    for (long j = 0; j < h.m; ++j) {
      if (j) s += ',';
      s += h.t(i, j).get_str();
    }
  }
  return s;
}

HalfIntegralForm parse_form(const std::string& s) {
  IntMat T;
  std::stringstream rows(s);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<Int> r;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      if (cell.empty()) throw UsageError("parse_form: empty entry in '" + s + "'");
      try {
        r.emplace_back(cell);
      } catch (const std::invalid_argument&) {
        throw UsageError("parse_form: bad integer '" + cell + "'");
      }
    }
    T.push_back(std::move(r));
  }
  if (T.empty()) throw UsageError("parse_form: empty encoding");
  return make_form(T);
}

Int det_mat(const IntMat& T) { return det_int(T); }

IntMat adjugate(const IntMat& T) {
  size_t n = T.size();
  IntMat adj(n, IntVec(n));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      IntMat sub(n - 1, IntVec(n - 1));
      for (size_t r = 0, rr = 0; r < n; ++r) {
        if (r == j) continue;  // adj = transpose of cofactor matrix
        for (size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          sub[rr][cc] = T[r][c];
          ++cc;
        }
        ++rr;
      }
      Int d = det_int(sub);
      adj[i][j] = ((i + j) % 2 == 0) ? d : -d;
    }
  return adj;
}

bool is_positive_definite(const IntMat& T) {
  // Sylvester: all leading principal minors positive.
  size_t n = T.size();
  for (size_t k = 1; k <= n; ++k) {
    IntMat sub(k, IntVec(k));
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) sub[i][j] = T[i][j];
    if (det_int(sub) <= 0) return false;
  }
  return true;
}

Int eval_form(const IntMat& T, const IntVec& x) { return eval_pair(T, x, x); }

Int eval_pair(const IntMat& T, const IntVec& x, const IntVec& y) {
  size_t n = T.size();
  if (x.size() != n || y.size() != n) throw UsageError("eval_pair: dimension mismatch");
  Int s(0);
  for (size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    Int row(0);
    for (size_t j = 0; j < n; ++j) row += T[i][j] * y[j];
    s += x[i] * row;
  }
  return s;
}

Int D_of(const HalfIntegralForm& h) {
  Int dT = det_mat(h.T);
  if (h.m % 2 == 0) return dT;
  // odd size: 4^{(m-1)/2} det h = det(2h)/2
  if (dT % 2 != 0) throw MathError("D_of: odd determinant for odd-size even matrix");
  return dT / 2;
}

// ---------------------------------------------------------------------

bool is_disc_value(const Int& N, long n) {
  if (N <= 0) return false;
  Int M = (n % 2 == 0) ? N : Int(-N);
  Int r = ((M % 4) + 4) % 4;
  return r == 0 || r == 1;
}

DiscriminantData disc_split(const Int& N, long n, const char* who) {
  if (!is_disc_value(N, n))
    throw UsageError(std::string(who) + ": N = " + N.get_str() +
                     " is not 0,1 mod 4 after the sign twist");
  Int M = (n % 2 == 0) ? N : Int(-N);
  // Square-free kernel: M = s * k^2 with s squarefree carrying the sign.
  Int s(M < 0 ? -1 : 1), k(1);
  for (const auto& [p, e] : factor(M)) {
    if (e % 2 == 1) s *= p;
    k *= pow_int(p, static_cast<unsigned long>(e / 2));
  }
  DiscriminantData dd;
  dd.N = N;
  Int smod = ((s % 4) + 4) % 4;
  if (smod == 1) {
    dd.d = abs(s);
    dd.f = k;
  } else {
    dd.d = 4 * abs(s);
    if (k % 2 != 0) throw MathError(std::string(who) + ": internal split failure");
    dd.f = k / 2;
  }
  if (dd.d * dd.f * dd.f != N) throw MathError(std::string(who) + ": split check failed");
  return dd;
}

long f_p_of(const Int& N, long n, long p) {
  DiscriminantData dd = disc_split(N, n, "f_p_of");
  if (dd.f == 1) return 0;
  return valuation(dd.f, p);
}

int psi_p_of(const Rational& M, long p) {
  if (M == 0) throw UsageError("psi_p_of: zero argument");
  // Only the square class matters: replace a/b by a*b.
  Int m = M.get_num() * M.get_den();
  Int P(p);
  long e = valuation(m, P);
  Int u = m / pow_int(P, static_cast<unsigned long>(e));
  if (p != 2) {
    if (e % 2 != 0) return 0;  // odd valuation: ramified
    return kronecker(u, P) == 1 ? 1 : -1;
  }
  if (e % 2 != 0) return 0;
  Int r = ((u % 8) + 8) % 8;
  if (r == 1) return 1;   // 2-adic square
  if (r == 5) return -1;  // unramified: Q_2(sqrt 5)
  return 0;               // u = 3,7 mod 8: ramified
}

int psi_p(const Int& N, long n, long p) {
  Rational M = (n % 2 == 0) ? Rational(N) : Rational(-N);
  return psi_p_of(M, p);
}

// ---------------------------------------------------------------------

static int hilbert_int(Int a, Int b, long v) {
  if (a == 0 || b == 0) throw UsageError("hilbert: zero argument");
  if (v == 0) return (a < 0 && b < 0) ? -1 : 1;
  Int P(v);
  long alpha = valuation(a, P);
  long beta = valuation(b, P);
  Int u = a / pow_int(P, static_cast<unsigned long>(alpha));
  Int w = b / pow_int(P, static_cast<unsigned long>(beta));
  if (v != 2) {
    long eps = to_long(Int((P - 1) / 2) % 2);  // parity of (p-1)/2
    int sign = ((alpha % 2) && (beta % 2) && eps) ? -1 : 1;
    int ku = kronecker(u, P), kw = kronecker(w, P);
    if (beta % 2) sign *= ku;
    if (alpha % 2) sign *= kw;
    return sign;
  }
  // p = 2 (Serre's formulas): eps(u) = (u-1)/2, omega(u) = (u^2-1)/8 mod 2.
  auto eps2 = [](const Int& x) { return mpz_tstbit(Int((x - 1) / 2).get_mpz_t(), 0); };
  auto omega2 = [](const Int& x) { return mpz_tstbit(Int((x * x - 1) / 8).get_mpz_t(), 0); };
  int exp = 0;
  exp ^= (eps2(u) & eps2(w));
  if (alpha % 2) exp ^= omega2(w);
  if (beta % 2) exp ^= omega2(u);
  return exp ? -1 : 1;
}

int hilbert(const Rational& a, const Rational& b, long v) {
  // (a, b) depends only on square classes; a/b ~ a*b as integers.
  return hilbert_int(a.get_num() * a.get_den(), b.get_num() * b.get_den(), v);
}

std::vector<Rational> diagonalize_sym(const MatrixQ& S_in) {
  if (S_in.rows != S_in.cols) throw UsageError("diagonalize_sym: not square");
  MatrixQ S = S_in;
  long n = S.rows;
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      if (S.at(i, j) != S.at(j, i)) throw UsageError("diagonalize_sym: not symmetric");
  std::vector<Rational> diag;
  for (long k = 0; k < n; ++k) {
    if (S.at(k, k) == 0) {
      // Prefer swapping in a nonzero diagonal entry.
      long swp = -1;
      for (long j = k + 1; j < n; ++j)
        if (S.at(j, j) != 0) {
          swp = j;
          break;
        }
      if (swp >= 0) {
        for (long t = 0; t < n; ++t) std::swap(S.at(k, t), S.at(swp, t));
        for (long t = 0; t < n; ++t) std::swap(S.at(t, k), S.at(t, swp));
      } else {
        // All remaining diagonal entries vanish; bring in a cross term:
        // adding row+column j makes the new (k,k) entry 2 S_kj.
        long j = -1;
        for (long t = k + 1; t < n; ++t)
          if (S.at(k, t) != 0) {
            j = t;
            break;
          }
        if (j < 0) throw UsageError("diagonalize_sym: degenerate matrix");
        for (long t = 0; t < n; ++t) S.at(k, t) += S.at(j, t);
        for (long t = 0; t < n; ++t) S.at(t, k) += S.at(t, j);
      }
    }
    Rational piv = S.at(k, k);
    diag.push_back(piv);
    // Row operations alone already produce the Schur complement on the
    // trailing block (it stays symmetric); the matching column operations
    // would only clear row k, which we do directly.
    for (long i = k + 1; i < n; ++i) {
      if (S.at(i, k) == 0) continue;
      Rational f = S.at(i, k) / piv;
      for (long t = k; t < n; ++t) S.at(i, t) -= f * S.at(k, t);
    }
    for (long i = k + 1; i < n; ++i) S.at(k, i) = 0;
  }
  return diag;
}

int hasse_of_diag(const std::vector<Rational>& diag, long v, bool include_equal) {
  int h = 1;
  for (size_t i = 0; i < diag.size(); ++i)
    for (size_t j = i; j < diag.size(); ++j) {
      if (i == j && !include_equal) continue;
      h *= hilbert(diag[i], diag[j], v);
    }
  return h;
}

int hasse(const MatrixQ& S, long v) {
  return hasse_of_diag(diagonalize_sym(S), v, /*include_equal=*/true);
}

// ---------------------------------------------------------------------

EvenLattice make_even_lattice(const IntMat& S) {
  EvenLattice L;
  L.size = static_cast<long>(S.size());
  if (L.size == 0) throw UsageError("make_even_lattice: empty");
  for (const auto& row : S)
    if (static_cast<long>(row.size()) != L.size)
      throw UsageError("make_even_lattice: not square");
  for (long i = 0; i < L.size; ++i) {
    if (S[static_cast<size_t>(i)][static_cast<size_t>(i)] % 2 != 0)
      throw UsageError("make_even_lattice: diagonal must be even");
    for (long j = 0; j < L.size; ++j)
      if (S[static_cast<size_t>(i)][static_cast<size_t>(j)] !=
          S[static_cast<size_t>(j)][static_cast<size_t>(i)])
        throw UsageError("make_even_lattice: not symmetric");
  }
  L.S = S;
  if (det_mat(S) == 0) throw UsageError("make_even_lattice: degenerate");
  return L;
}

static MatrixQ to_matrixq(const IntMat& S) {
  long n = static_cast<long>(S.size());
  MatrixQ m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      m.at(i, j) = Rational(S[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return m;
}

int eta_variant(const EvenLattice& L, long v, bool hasse_include_equal) {
  if (L.size % 2 != 1) throw UsageError("eta: size must be odd (2n-1)");
  long n = (L.size + 1) / 2;
  Int dS = det_mat(L.S);
  Rational d(dS);
  Rational sd = (n % 2 == 1) ? d : -d;  // (-1)^{n-1} det S
  int h = hasse_of_diag(diagonalize_sym(to_matrixq(L.S)), v, hasse_include_equal);
  int val = h * hilbert(d, sd, v);
  if (((n * (n - 1) / 2) % 2) != 0) val *= hilbert(Rational(-1), Rational(-1), v);
  return val;
}

int eta(const EvenLattice& L, long v) { return eta_variant(L, v, /*hasse_include_equal=*/true); }

// Isotropy of a nondegenerate form over Q_p from its classification data
// (rank, discriminant square class, strict Hasse invariant).
static bool isotropic_qp(long rank, const Rational& d, int eps, long p) {
  if (rank >= 5) return true;
  if (rank <= 1) return false;
  if (rank == 2) return psi_p_of(-d, p) == 1;  // -d a square
  if (rank == 3) return eps == hilbert(Rational(-1), -d, p);
  // rank 4: anisotropic exactly for square discriminant with the wrong Hasse
  if (psi_p_of(d, p) != 1) return true;
  return eps == hilbert(Rational(-1), Rational(-1), p);
}

long witt_index(const EvenLattice& L, long p) {
  std::vector<Rational> diag = diagonalize_sym(to_matrixq(L.S));
  long rank = static_cast<long>(diag.size());
  Rational d(1);
  for (const auto& a : diag) d *= a;
  int eps = hasse_of_diag(diag, p, /*include_equal=*/false);
  long witt = 0;
  while (isotropic_qp(rank, d, eps, p)) {
    // Split one hyperbolic plane H: disc(H) = -1, c(H) = 1, and
    // c(H + W) = c(W) * (disc H, disc W), so c(W) = c * (-1, d_W).
    rank -= 2;
    d = -d;
    eps *= hilbert(Rational(-1), d, p);
    ++witt;
  }
  return witt;
}

WittEtaReport witt_eta_report(const EvenLattice& L, long p) {
  WittEtaReport r;
  r.dim = L.size;
  r.witt = witt_index(L, p);
  r.eta_p = eta(L, p);
  r.satisfies_dim_relation = (r.dim == 2 * r.witt + 2 - r.eta_p);
  long n = (L.size + 1) / 2;
  r.satisfies_halfdim_relation = (n == 2 * r.witt + 2 - r.eta_p);
  return r;
}

// Rank of an integer matrix over F_p, plus optionally a kernel basis with
// entries in [0, p).
static long modp_rank(const IntMat& M, long p, std::vector<std::vector<long>>* kernel) {
  size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  std::vector<std::vector<long>> a(rows, std::vector<long>(cols));
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) {
      Int r = ((M[i][j] % p) + p) % p;
      a[i][j] = r.get_si();
    }
  auto inv_mod = [p](long x) {
    long r = 1, b = x % p, e = p - 2;  // Fermat: p prime
    while (e) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  std::vector<long> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    long inv = inv_mod(a[r][c]);
    for (size_t j = 0; j < cols; ++j) a[r][j] = a[r][j] * inv % p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      long f = a[i][c];
      for (size_t j = 0; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
    }
    pivot_col.push_back(static_cast<long>(c));
    ++r;
  }
  if (kernel) {
    kernel->clear();
    std::vector<bool> is_piv(cols, false);
    for (long c : pivot_col) is_piv[static_cast<size_t>(c)] = true;
    for (size_t free = 0; free < cols; ++free) {
      if (is_piv[free]) continue;
      std::vector<long> v(cols, 0);
      v[free] = 1;
      for (size_t rr = 0; rr < pivot_col.size(); ++rr) {
        long c = pivot_col[rr];
        v[static_cast<size_t>(c)] = (p - a[rr][free] % p) % p;
      }
      kernel->push_back(std::move(v));
    }
  }
  return static_cast<long>(r);
}

long radical_dim(const EvenLattice& L, long p) {
  if (p != 2) return L.size - modp_rank(L.S, p, nullptr);
  // p = 2: radical of the quadratic form q(x) = S[x]/2 mod 2 inside the
  // radical V of the polar form S mod 2.  q is F_2-linear on V, so the
  // radical is the kernel of one linear functional on V.
  std::vector<std::vector<long>> V;
  modp_rank(L.S, 2, &V);
  long dimV = static_cast<long>(V.size());
  if (dimV == 0) return 0;
  long nonzero = 0;
  for (const auto& v : V) {
    IntVec x(v.size());
    for (size_t i = 0; i < v.size(); ++i) x[i] = v[i];
    Int q = eval_form(L.S, x) / 2;
    if (((q % 2) + 2) % 2 == 1) ++nonzero;
  }
  return nonzero ? dimV - 1 : dimV;
}

bool is_maximal(const EvenLattice& L) {
  if (!is_positive_definite(L.S)) throw UsageError("is_maximal: not positive definite");
  Int dS = det_mat(L.S);
  size_t n = static_cast<size_t>(L.size);
  for (const auto& [P, e] : factor(dS)) {
    if (e < 2) continue;  // index-p superlattice divides det by p^2
    if (!P.fits_slong_p()) throw CapabilityError("is_maximal: prime too large");
    long p = P.get_si();
    // Lines in (1/p)L / L: representatives x in [0,p)^n with leading 1.
    // L + Z(x/p) is again even integral iff S x = 0 mod p and
    // S[x] = 0 mod 2p^2 (both conditions only depend on x mod p).
    IntVec xi(n, Int(0));
    for (size_t lead = 0; lead < n; ++lead) {
      std::fill(xi.begin(), xi.end(), Int(0));
      xi[lead] = 1;
      size_t nfree = n - lead - 1;
      long total = 1;
      for (size_t i = 0; i < nfree; ++i) total *= p;
      for (long idx = 0; idx < total; ++idx) {
        long t = idx;
        for (size_t i = 0; i < nfree; ++i) {
          xi[lead + 1 + i] = t % p;
          t /= p;
        }
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) {
          Int dot(0);
          for (size_t j = 0; j < n; ++j) dot += L.S[i][j] * xi[j];
          if (dot % p != 0) ok = false;
        }
        if (ok && eval_form(L.S, xi) % (2 * Int(p) * Int(p)) == 0) return false;
      }
    }
  }
  return true;
}

std::vector<long> primes_radical(const EvenLattice& L, long dim_value) {
  std::vector<long> out;
  Int dS = det_mat(L.S);
  for (const auto& [P, e] : factor(dS)) {
    (void)e;
    if (!P.fits_slong_p()) throw CapabilityError("primes_radical: prime too large");
    long p = P.get_si();
    if (radical_dim(L, p) == dim_value) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------

HalfIntegralForm border(const HalfIntegralForm& B, const Int& a, const IntVec& w) {
  if (static_cast<long>(w.size()) != B.m) throw UsageError("border: vector size mismatch");
  size_t n = static_cast<size_t>(B.m);
  IntMat T(n + 1, IntVec(n + 1));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) T[i][j] = B.T[i][j];
  for (size_t i = 0; i < n; ++i) {
    T[i][n] = w[i];
    T[n][i] = w[i];
  }
  T[n][n] = 2 * a;
  if (!is_positive_definite(T)) throw UsageError("border: pair violates positivity");
  HalfIntegralForm h;
  h.m = B.m + 1;
  h.T = T;
  return h;
}

Int border_disc(const EvenLattice& L, const Int& a, const IntVec& w) {
  // det [[S, w],[w^t, 2a]] = 2a det S - adj(S)[w].
  Int d = det_mat(L.S);
  IntMat adj = adjugate(L.S);
  return 2 * a * d - eval_form(adj, w);
}

HalfIntegralForm find_prime_disc_form(long p, long m) {
  if (m == 1) {
    IntMat T{{Int(2 * p)}};
    return make_form(T);
  }
  if (m != 3) throw UsageError("find_prime_disc_form: size must be 1 or 3");
  // D ranges over det(2B)/2; search the enumerated classes.
  for (const auto& h : enumerate_forms(3, Int(p)))
    if (D_of(h) == p) return h;
  throw MathError("find_prime_disc_form: no ternary class with D = " + std::to_string(p) +
                  " found within the search bound");
}

}  // namespace ml
