// Classical and half-integral weight layers: dimension bookkeeping,
// integral-weight eigenforms, the plus subspace, the eigenform pairing,
// the operator comparison, and declared-sign coefficient tables.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <maasslift/modforms.hpp>
#include <maasslift/numbers.hpp>

#include <map>

using namespace ml;

TEST_CASE("cusp space dimensions at level one") {
  std::map<long, long> want = {{4, 0},  {6, 0},  {8, 0},  {10, 0}, {12, 1},
                               {14, 0}, {16, 1}, {18, 1}, {20, 1}, {22, 1},
                               {24, 2}, {26, 1}};
  for (const auto& [w, d] : want) CHECK(dim_cusp_level1(w) == d);
}

TEST_CASE("weight-12 eigenform coefficients") {
  EigenformInt f = level1_eigenform(12, 12);
  CHECK(f.two_k == 12);
  long want[] = {0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612};
  for (long n = 1; n <= 11; ++n) CHECK(f.q.coeff(n) == want[n]);
  CHECK(f.eigenvalues.at(2) == -24);
  CHECK(f.eigenvalues.at(11) == 534612);
}

TEST_CASE("weight-18 eigenform coefficients and Hecke structure") {
  EigenformInt f = level1_eigenform(18, 60);
  CHECK(f.q.coeff(2) == -528);
  CHECK(f.q.coeff(3) == -4284);
  // Multiplicativity and the prime-power recursion pin the construction.
  CHECK(f.q.coeff(6) == f.q.coeff(2) * f.q.coeff(3));
  CHECK(f.q.coeff(4) == f.q.coeff(2) * f.q.coeff(2) - pow_int(Int(2), 17));
  CHECK(f.q.coeff(35) == f.q.coeff(5) * f.q.coeff(7));
}

TEST_CASE("generators of the form ring") {
  QExpansion th = theta_series(10);
  long want_theta[] = {1, 2, 0, 0, 2, 0, 0, 0, 0, 2};
  for (long n = 0; n < 10; ++n) CHECK(th.coeff(n) == want_theta[n]);

  QExpansion e4 = eisenstein4(5);
  CHECK(e4.coeff(0) == 1);
  CHECK(e4.coeff(1) == 240);
  CHECK(e4.coeff(2) == 2160);

  QExpansion e6 = eisenstein6(5);
  CHECK(e6.coeff(0) == 1);
  CHECK(e6.coeff(1) == -504);

  QExpansion d = delta_series(8);
  CHECK(d.coeff(1) == 1);
  CHECK(d.coeff(2) == -24);
  CHECK(d.coeff(7) == -16744);
}

TEST_CASE("plus subspace dimensions match the integral-weight spaces") {
  for (long k : {6L, 7L, 8L, 9L, 10L, 11L, 13L}) {
    std::vector<QExpansion> basis = plus_cusp_space(k, 4 * k + 12);
    CHECK(static_cast<long>(basis.size()) == dim_cusp_level1(2 * k));
  }
  CHECK_THROWS_AS(plus_cusp_space(9, 20), UsageError);  // below determining bound
}

TEST_CASE("plus-space coefficients live on the admissible progression") {
  std::vector<QExpansion> basis = plus_cusp_space(9, 60);
  REQUIRE(basis.size() == 1);
  // For odd k the coefficients vanish off m = 0,3 mod 4.
  for (long m : {1L, 2L, 5L, 6L, 9L, 10L}) CHECK(basis[0].coeff(m) == 0);
}

TEST_CASE("weight 9+1/2 eigenform") {
  EigenformHalf g = plus_eigenform(9, 60, 7);
  CHECK(g.k == 9);
  std::map<long, long> want = {{3, 1}, {4, -2}, {7, -16}, {8, 36}, {11, 99}, {12, -272}};
  for (const auto& [m, c] : want) CHECK(g.q.coeff(m) == c);
  CHECK(g.q.coeff(1) == 0);
  CHECK(g.q.coeff(2) == 0);
  CHECK(g.matched.two_k == 18);
  CHECK(g.matched.eigenvalues.at(2) == -528);
}

TEST_CASE("weight 6+1/2 eigenform") {
  EigenformHalf g = plus_eigenform(6, 60, 7);
  std::map<long, long> want = {{1, 1}, {4, -56}, {5, 120}, {8, -240},
                               {9, 9}, {12, 1440}, {13, -1320}};
  for (const auto& [m, c] : want) CHECK(g.q.coeff(m) == c);
  CHECK(g.q.coeff(2) == 0);
  CHECK(g.q.coeff(3) == 0);
  CHECK(g.matched.two_k == 12);
  CHECK(g.matched.eigenvalues.at(2) == -24);
}

TEST_CASE("eigenvalue pairing is verified prime by prime") {
  EigenformHalf g = plus_eigenform(9, 120, 2);
  ShimuraReport rep = shimura_match(g, g.matched, 5);
  CHECK(rep.verified_primes == std::vector<long>{2, 3, 5});
  // A wrong partner fails the verification.
  EigenformInt wrong = level1_eigenform(12, 120);
  CHECK_THROWS_AS(shimura_match(g, wrong, 3), MathError);
}

TEST_CASE("square-index operator agrees with its eigenvalue prediction") {
  EigenformHalf g = plus_eigenform(9, 150, 7);
  QExpansion t4 = hecke_half_T2(2, 9, g.q);
  QExpansion pred = Rational(g.matched.eigenvalues.at(2)) * g.q;
  CHECK(agree(t4, pred));
}

TEST_CASE("operator comparison names the matching normalization") {
  EigenformHalf g9 = plus_eigenform(9, 200, 7);
  POpResult even_l = P_op(2, 9, g9.q);
  CHECK(even_l.agree_raw);
  CHECK_FALSE(even_l.agree);  // the projected variant differs at l = 2
  POpResult odd_l = P_op(3, 9, g9.q);
  CHECK(odd_l.agree);
  CHECK(odd_l.agree_raw);  // both displays coincide for odd l
}

TEST_CASE("declared-sign tables: construction and criterion") {
  std::map<Int, Rational> X;
  X[Int(3)] = Rational(5);
  X[Int(8)] = Rational(-1);
  NewformPlusTable t = synthetic_plus_table(9, 3, 1, X, 360);
  PlusVanishingReport rep = plus_vanishing_criterion(t, 3, 1, Int(40));
  CHECK(rep.vanishing_holds);
  CHECK(rep.eigen_holds);

  // Breaking the eigen relation at one index is detected.
  NewformPlusTable bad = t;
  bad.coeffs[Int(27)] = bad.coeffs.at(Int(27)) + 1;
  PlusVanishingReport rep2 = plus_vanishing_criterion(bad, 3, 1, Int(40));
  CHECK_FALSE(rep2.eigen_holds);
}
