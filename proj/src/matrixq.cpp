#include "maasslift/matrixq.hpp"

#include <algorithm>

namespace ml {

std::vector<long> rref(MatrixQ& m) {
  std::vector<long> pivots;
  long r = 0;
  for (long col = 0; col < m.cols && r < m.rows; ++col) {
    long piv = -1;
    for (long i = r; i < m.rows; ++i)
      if (m.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (long j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
    Rational inv = Rational(1) / m.at(r, col);
    for (long j = col; j < m.cols; ++j) m.at(r, j) *= inv;
    for (long i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, col) == 0) continue;
      Rational f = m.at(i, col);
      for (long j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Rational>> kernel_basis(const MatrixQ& m) {
  MatrixQ e = m;
  std::vector<long> pivots = rref(e);
  std::vector<bool> is_pivot(static_cast<size_t>(m.cols), false);
  for (long c : pivots) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<std::vector<Rational>> basis;
  for (long free = 0; free < m.cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<size_t>(m.cols), Rational(0));
    v[static_cast<size_t>(free)] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<size_t>(pivots[r])] = -e.at(static_cast<long>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

LinearSolution solve_linear(const MatrixQ& m, const std::vector<Rational>& b) {
  if (static_cast<long>(b.size()) != m.rows)
    throw UsageError("solve_linear: rhs length mismatch");
  MatrixQ e(m.rows, m.cols + 1);
  for (long i = 0; i < m.rows; ++i) {
    for (long j = 0; j < m.cols; ++j) e.at(i, j) = m.at(i, j);
    e.at(i, m.cols) = b[static_cast<size_t>(i)];
  }
  std::vector<long> pivots = rref(e);
  LinearSolution sol;
  // Inconsistent iff some pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == m.cols) {
    sol.consistent = false;
    return sol;
  }
  sol.consistent = true;
  sol.particular.assign(static_cast<size_t>(m.cols), Rational(0));
  for (size_t r = 0; r < pivots.size(); ++r)
    sol.particular[static_cast<size_t>(pivots[r])] = e.at(static_cast<long>(r), m.cols);
  MatrixQ homo = m;
  sol.kernel = kernel_basis(homo);
  return sol;
}

Int det_int(const std::vector<std::vector<Int>>& m_in) {
  size_t n = m_in.size();
  for (const auto& row : m_in)
    if (row.size() != n) throw UsageError("det_int: matrix not square");
  if (n == 0) return Int(1);
  std::vector<std::vector<Int>> m = m_in;
  // Bareiss fraction-free elimination; every division below is exact.
  Int sign(1), prev(1);
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return Int(0);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

std::vector<long> smith_valuations(std::vector<std::vector<Int>> m, const Int& p) {
  // d_1 ... d_k = gcd of all k x k minors, so the p-valuation of d_k is
  // g_k - g_{k-1} with g_k = min over k x k minors of v_p(minor).  The
  // matrices here are tiny (size <= 5), so enumerating minors is cheap.
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  size_t rank_max = std::min(rows, cols);
  std::vector<long> g(rank_max + 1, -1);  // -1 = +infinity (all minors vanish)
  g[0] = 0;
  std::vector<size_t> ri, ci;
  for (size_t k = 1; k <= rank_max; ++k) {
    long best = -1;
    // Enumerate k-subsets of rows and columns.
    std::vector<size_t> rsel(k), csel(k);
    for (size_t i = 0; i < k; ++i) rsel[i] = i;
    auto next_subset = [](std::vector<size_t>& s, size_t n) {
      size_t k2 = s.size();
      size_t i = k2;
      while (i > 0) {
        --i;
        if (s[i] + (k2 - i) < n) {
          ++s[i];
          for (size_t j = i + 1; j < k2; ++j) s[j] = s[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    do {
      for (size_t i = 0; i < k; ++i) csel[i] = i;
      do {
        std::vector<std::vector<Int>> sub(k, std::vector<Int>(k));
        for (size_t i = 0; i < k; ++i)
          for (size_t j = 0; j < k; ++j) sub[i][j] = m[rsel[i]][csel[j]];
        Int d = det_int(sub);
        if (d != 0) {
          long v = valuation(d, p);
          if (best < 0 || v < best) best = v;
        }
      } while (next_subset(csel, cols));
    } while (next_subset(rsel, rows));
    g[k] = best;
  }
  std::vector<long> vals;
  for (size_t k = 1; k <= rank_max; ++k) {
    if (g[k] < 0)
      vals.push_back(-1);  // elementary divisor 0 (infinite valuation)
    else
      vals.push_back(g[k] - g[k - 1]);
  }
  return vals;
}

}  // namespace ml
