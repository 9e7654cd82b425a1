// Exact dense linear algebra over Q and over Z.
//
// MatrixQ provides the reduced row echelon form, kernel bases, and linear
// solves used by the plus-space cut and the relation solver.  The integer
// side provides Bareiss determinants and Smith normal form valuations for
// small matrices.
#pragma once

#include "maasslift/numbers.hpp"

namespace ml {

struct MatrixQ {
  long rows = 0, cols = 0;
  std::vector<Rational> a;  // row-major

  MatrixQ() = default;
  MatrixQ(long r, long c)
      : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c), Rational(0)) {}

  Rational& at(long i, long j) { return a[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)]; }
  const Rational& at(long i, long j) const {
    return a[static_cast<size_t>(i) * static_cast<size_t>(cols) + static_cast<size_t>(j)];
  }
};

// In-place Gauss-Jordan reduction; returns the pivot columns.
std::vector<long> rref(MatrixQ& m);

// Basis of the right kernel {x : M x = 0}, each vector of length cols.
std::vector<std::vector<Rational>> kernel_basis(const MatrixQ& m);

// Solve M x = b exactly.  Returns (has_solution, particular solution,
// kernel basis); the full solution set is particular + span(kernel).
struct LinearSolution {
  bool consistent = false;
  std::vector<Rational> particular;
  std::vector<std::vector<Rational>> kernel;
};
LinearSolution solve_linear(const MatrixQ& m, const std::vector<Rational>& b);

// Exact determinant of an integer matrix (fraction-free Bareiss).
Int det_int(const std::vector<std::vector<Int>>& m);

// Valuations of the elementary divisors of an integer matrix at p:
// the multiset {v_p(d_1), ..., v_p(d_r)} padded with `infinity_marker`
// (= -1 meaning +infinity) up to min(rows, cols) for vanishing divisors.
std::vector<long> smith_valuations(std::vector<std::vector<Int>> m, const Int& p);

}  // namespace ml
