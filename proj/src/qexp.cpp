#include "maasslift/qexp.hpp"

#include <algorithm>

namespace ml {

bool QExpansion::is_zero() const {
  for (const auto& x : c)
    if (x != 0) return false;
  return true;
}

QExpansion operator+(const QExpansion& a, const QExpansion& b) {
  QExpansion r(std::min(a.prec, b.prec));
  for (long m = 0; m < r.prec; ++m) r.coeff(m) = a.coeff(m) + b.coeff(m);
  return r;
}

QExpansion operator-(const QExpansion& a, const QExpansion& b) {
  QExpansion r(std::min(a.prec, b.prec));
  for (long m = 0; m < r.prec; ++m) r.coeff(m) = a.coeff(m) - b.coeff(m);
  return r;
}

static bool all_integral(const QExpansion& a) {
  for (const auto& x : a.c)
    if (x.get_den() != 1) return false;
  return true;
}

QExpansion operator*(const QExpansion& a, const QExpansion& b) {
  long prec = std::min(a.prec, b.prec);
  QExpansion r(prec);
  if (all_integral(a) && all_integral(b)) {
    // Integer convolution avoids mpq canonicalization in the inner loop.
    std::vector<Int> az(static_cast<size_t>(prec)), bz(static_cast<size_t>(prec)),
        rz(static_cast<size_t>(prec), Int(0));
    for (long m = 0; m < prec; ++m) {
      az[static_cast<size_t>(m)] = a.coeff(m).get_num();
      bz[static_cast<size_t>(m)] = b.coeff(m).get_num();
    }
    Int tmp;
    for (long i = 0; i < prec; ++i) {
      if (az[static_cast<size_t>(i)] == 0) continue;
      for (long j = 0; j + i < prec; ++j) {
        if (bz[static_cast<size_t>(j)] == 0) continue;
        tmp = az[static_cast<size_t>(i)] * bz[static_cast<size_t>(j)];
        rz[static_cast<size_t>(i + j)] += tmp;
      }
    }
    for (long m = 0; m < prec; ++m) r.coeff(m) = Rational(rz[static_cast<size_t>(m)]);
    return r;
  }
  for (long i = 0; i < prec; ++i) {
    if (a.coeff(i) == 0) continue;
    for (long j = 0; j + i < prec; ++j) {
      if (b.coeff(j) == 0) continue;
      r.coeff(i + j) += a.coeff(i) * b.coeff(j);
    }
  }
  return r;
}

QExpansion operator*(const Rational& s, const QExpansion& a) {
  QExpansion r(a.prec);
  for (long m = 0; m < a.prec; ++m) r.coeff(m) = s * a.coeff(m);
  return r;
}

bool agree(const QExpansion& a, const QExpansion& b) {
  long prec = std::min(a.prec, b.prec);
  for (long m = 0; m < prec; ++m)
    if (a.coeff(m) != b.coeff(m)) return false;
  return true;
}

QExpansion qexp_pow(const QExpansion& a, long e) {
  if (e < 0) throw UsageError("qexp_pow: negative exponent");
  QExpansion r(a.prec);
  r.coeff(0) = 1;
  QExpansion base = a;
  long n = e;
  while (n) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

QExpansion qexp_div_exact(const QExpansion& a, const Int& d) {
  if (d == 0) throw UsageError("qexp_div_exact: division by zero");
  QExpansion r(a.prec);
  for (long m = 0; m < a.prec; ++m) r.coeff(m) = a.coeff(m) / Rational(d);
  return r;
}

}  // namespace ml
