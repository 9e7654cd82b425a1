#include "maasslift/quadform.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace ml {

namespace {

std::vector<Int> flatten(const IntMat& T) {
  std::vector<Int> v;
  for (const auto& row : T)
    for (const auto& x : row) v.push_back(x);
  return v;
}

bool lex_less(const IntMat& A, const IntMat& B) { return flatten(A) < flatten(B); }

// Reduction-box constants: a reduced form of size m satisfies
// prod(diagonal) <= c_m * det, with c = 1, 4/3, 2, 4 for m = 1..4.
Rational box_constant(long m) {
  switch (m) {
    case 1: return Rational(1);
    case 2: return Rational(4, 3);
    case 3: return Rational(2);
    case 4: return Rational(4);
    default: throw UsageError("enumerate_forms: size must be 1..4");
  }
}

// All even symmetric positive definite T with ascending even diagonal,
// |T_ij| <= T_ii / 2 for i < j, diagonal product <= diag_bound, and
// det T <= detT_max.  Every class with det T <= detT_max has at least one
// representative of this shape.
std::vector<IntMat> box_candidates(long m, const Int& detT_max, const Rational& slack) {
  Rational diag_bound_q = box_constant(m) * slack * Rational(detT_max);
  Int diag_bound = diag_bound_q.get_num() / diag_bound_q.get_den();
  std::vector<IntMat> out;
  std::vector<long> diag(static_cast<size_t>(m));
  size_t npairs = static_cast<size_t>(m * (m - 1) / 2);
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < static_cast<size_t>(m); ++i)
    for (size_t j = i + 1; j < static_cast<size_t>(m); ++j) pairs.emplace_back(i, j);

  std::vector<long> off(npairs);
  IntMat T(static_cast<size_t>(m), IntVec(static_cast<size_t>(m)));

  auto emit_offdiag = [&]() {
    for (size_t i = 0; i < static_cast<size_t>(m); ++i) {
      T[i][i] = diag[i];
      for (size_t j = 0; j < i; ++j) T[i][j] = T[j][i];
    }
    // Odometer over the off-diagonal entries.
    size_t k = 0;
    for (k = 0; k < npairs; ++k) {
      off[k] = -diag[pairs[k].first] / 2;
      T[pairs[k].first][pairs[k].second] = off[k];
      T[pairs[k].second][pairs[k].first] = off[k];
    }
    for (;;) {
      if (is_positive_definite(T) && det_mat(T) <= detT_max) out.push_back(T);
      for (k = 0; k < npairs; ++k) {
        if (off[k] < diag[pairs[k].first] / 2) {
          ++off[k];
          T[pairs[k].first][pairs[k].second] = off[k];
          T[pairs[k].second][pairs[k].first] = off[k];
          break;
        }
        off[k] = -diag[pairs[k].first] / 2;
        T[pairs[k].first][pairs[k].second] = off[k];
        T[pairs[k].second][pairs[k].first] = off[k];
      }
      if (k == npairs) break;
    }
  };

  // Ascending even diagonals with product <= diag_bound.
  std::function<void(size_t, long, Int)> rec = [&](size_t pos, long lo, Int prod) {
    if (pos == static_cast<size_t>(m)) {
      emit_offdiag();
      return;
    }
    for (long d = lo;; d += 2) {
      Int np = prod * d;
      // Remaining entries are >= d, so the final product is >= np * d^rest.
      Int min_final = np;
      for (size_t r = pos + 1; r < static_cast<size_t>(m); ++r) min_final *= d;
      if (min_final > diag_bound) break;
      diag[pos] = d;
      rec(pos + 1, d, np);
    }
  };
  rec(0, 2, Int(1));
  return out;
}

// Coordinate bounds for vectors x with x^t T x <= c:
// x_i^2 <= c * adj(T)_ii / det(T).
std::vector<long> coord_bounds(const IntMat& T, const IntMat& adj, const Int& det,
                               const Int& c) {
  std::vector<long> B(T.size());
  for (size_t i = 0; i < T.size(); ++i) {
    if (c < 0) {
      B[i] = -1;
      continue;
    }
    Int num = c * adj[i][i];
    B[i] = to_long(isqrt(num / det));
  }
  return B;
}

}  // namespace

std::vector<long> repr_counts(const IntMat& T, long bound) {
  std::vector<long> counts(static_cast<size_t>(bound), 0);
  Int det = det_mat(T);
  IntMat adj = adjugate(T);
  Int cmax = 2 * Int(bound);
  std::vector<long> B = coord_bounds(T, adj, det, cmax);
  size_t m = T.size();
  // Machine integers suffice: coordinates and form values here are tiny.
  std::vector<std::vector<long>> Tl(m, std::vector<long>(m));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) Tl[i][j] = to_long(T[i][j]);
  long cmaxl = 2 * bound;
  std::vector<long> x(m);
  for (size_t i = 0; i < m; ++i) x[i] = -B[i];
  for (;;) {
    bool zero = true;
    long val = 0;
    for (size_t i = 0; i < m; ++i) {
      if (x[i]) zero = false;
      long row = 0;
      for (size_t j = 0; j < m; ++j) row += Tl[i][j] * x[j];
      val += x[i] * row;
    }
    if (!zero && val <= cmaxl && val % 2 == 0) {
      long j = val / 2;
      if (j >= 1 && j <= bound) ++counts[static_cast<size_t>(j - 1)];
    }
    size_t k = 0;
    for (k = 0; k < m; ++k) {
      if (x[k] < B[k]) {
        ++x[k];
        break;
      }
      x[k] = -B[k];
    }
    if (k == m) break;
  }
  return counts;
}

bool isometric(const HalfIntegralForm& h1, const HalfIntegralForm& h2) {
  if (h1.m != h2.m) return false;
  const IntMat& T1 = h1.T;
  const IntMat& T2 = h2.T;
  Int det1 = det_mat(T1);
  if (det1 != det_mat(T2)) return false;
  size_t m = static_cast<size_t>(h1.m);
  IntMat adj1 = adjugate(T1);

  // Build U column by column: T1[u_j] = (T2)_jj and u_i^t T1 u_j = (T2)_ij.
  std::vector<IntVec> cols;
  std::vector<IntVec> t1u;  // cached T1 * u_i

  std::function<bool(size_t)> place = [&](size_t j) -> bool {
    if (j == m) return true;  // determinant is then automatically +-1
    Int target = T2[j][j];
    std::vector<long> B = coord_bounds(T1, adj1, det1, target);
    std::vector<long> x(m);
    for (size_t i = 0; i < m; ++i) x[i] = -B[i];
    IntVec xi(m);
    for (;;) {
      for (size_t i = 0; i < m; ++i) xi[i] = x[i];
      bool ok = true;
      for (size_t i = 0; i < j && ok; ++i) {
        Int dot(0);
        for (size_t t = 0; t < m; ++t) dot += t1u[i][t] * xi[t];
        if (dot != T2[i][j]) ok = false;
      }
      if (ok && eval_form(T1, xi) == target) {
        IntVec cached(m, Int(0));
        for (size_t r = 0; r < m; ++r)
          for (size_t c = 0; c < m; ++c) cached[r] += T1[r][c] * xi[c];
        cols.push_back(xi);
        t1u.push_back(cached);
        if (place(j + 1)) return true;
        cols.pop_back();
        t1u.pop_back();
      }
      size_t k = 0;
      for (k = 0; k < m; ++k) {
        if (x[k] < B[k]) {
          ++x[k];
          break;
        }
        x[k] = -B[k];
      }
      if (k == m) break;
    }
    return false;
  };
  return place(0);
}

namespace {

// Group candidate matrices into isometry classes, keeping the lex-least
// representative of each; buckets on cheap invariants first.
std::vector<IntMat> dedup_classes(const std::vector<IntMat>& cands) {
  std::map<std::pair<std::string, std::vector<long>>, std::vector<IntMat>> buckets;
  const long profile_bound = 6;
  for (const auto& T : cands) {
    // Keep only candidates inside the reduction box of their own
    // determinant; every class has one there, and the representative then
    // never depends on the enumeration bound or the slack.  This keeps the
    // choice identical to the one canonical_reduce makes.
    Int det = det_mat(T);
    Int prod(1);
    for (size_t i = 0; i < T.size(); ++i) prod *= T[i][i];
    if (Rational(prod) > box_constant(static_cast<long>(T.size())) * Rational(det)) continue;
    auto key = std::make_pair(det.get_str(), repr_counts(T, profile_bound));
    auto& bucket = buckets[key];
    bool merged = false;
    HalfIntegralForm hT{static_cast<long>(T.size()), T};
    for (auto& rep : bucket) {
      HalfIntegralForm hR{static_cast<long>(rep.size()), rep};
      if (isometric(hR, hT)) {
        if (lex_less(T, rep)) rep = T;
        merged = true;
        break;
      }
    }
    if (!merged) bucket.push_back(T);
  }
  std::vector<IntMat> reps;
  for (auto& [key, bucket] : buckets)
    for (auto& T : bucket) reps.push_back(T);
  return reps;
}

}  // namespace

std::vector<HalfIntegralForm> enumerate_forms(long m, const Int& D_max,
                                              const Rational& box_slack) {
  if (D_max <= 0) return {};
  if (box_slack < 1) throw UsageError("enumerate_forms: box_slack must be >= 1");
  Int detT_max = (m % 2 == 0) ? D_max : Int(2 * D_max);
  std::vector<IntMat> cands = box_candidates(m, detT_max, box_slack);
  std::vector<IntMat> reps = dedup_classes(cands);
  std::vector<HalfIntegralForm> out;
  out.reserve(reps.size());
  for (auto& T : reps) out.push_back(make_form(T));
  std::sort(out.begin(), out.end(), [](const HalfIntegralForm& a, const HalfIntegralForm& b) {
    Int Da = D_of(a), Db = D_of(b);
    if (Da != Db) return Da < Db;
    return lex_less(a.T, b.T);
  });
  return out;
}

HalfIntegralForm canonical_reduce(const HalfIntegralForm& h) {
  Int detT = det_mat(h.T);
  std::vector<IntMat> cands = box_candidates(h.m, detT, Rational(1));
  std::vector<long> profile = repr_counts(h.T, 6);
  bool found = false;
  IntMat best;
  for (const auto& T : cands) {
    if (det_mat(T) != detT) continue;
    if (repr_counts(T, 6) != profile) continue;
    HalfIntegralForm cand{static_cast<long>(T.size()), T};
    if (!isometric(h, cand)) continue;
    if (!found || lex_less(T, best)) {
      best = T;
      found = true;
    }
  }
  if (!found) throw MathError("canonical_reduce: no reduced representative found");
  return make_form(best);
}

}  // namespace ml
