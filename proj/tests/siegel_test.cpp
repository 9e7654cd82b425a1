// Local series of one class at one prime: brute-forced coefficients, the
// rational-function reconstruction, the normalized symmetric form, and
// the integral weights derived from it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <maasslift/phi.hpp>
#include <maasslift/quadform.hpp>
#include <maasslift/siegel.hpp>

#include <vector>

using namespace ml;

namespace {
std::vector<Int> ints(std::initializer_list<long> v) {
  std::vector<Int> out;
  for (long x : v) out.emplace_back(x);
  return out;
}
}  // namespace

TEST_CASE("brute-forced series coefficients, small class") {
  // D = 3 class at p = 3: the first three coefficients.
  HalfIntegralForm h = parse_form("2,1;1,2");
  CHECK(siegel_bruteforce(h, 3, 2) == ints({1, -1, -9}));
  CHECK(siegel_bruteforce(h, 5, 2) == ints({1, -6, 5}));
}

TEST_CASE("the two discriminant-16 classes have distinct local data") {
  // Same D, same conductor, different classes, different series.
  LocalSiegelData split = local_siegel_data(parse_form("2,0;0,8"), 2);
  CHECK(split.fp == 1);
  CHECK(split.b == ints({1, -1, 4, -4, -32}));
  CHECK(split.F == ints({1, 0, 8}));
  CHECK(phi_local(split) == std::vector<Rational>{Rational(1), Rational(0)});

  LocalSiegelData diag = local_siegel_data(parse_form("4,0;0,4"), 2);
  CHECK(diag.fp == 1);
  CHECK(diag.b == ints({1, 3, 0, -20, -16}));
  CHECK(diag.F == ints({1, 4, 8}));
  CHECK(phi_local(diag) == std::vector<Rational>{Rational(1), Rational(2)});
}

TEST_CASE("structure: constant term, degree, and trivial cases") {
  for (const char* s : {"2,-1;-1,2", "2,0;0,2", "2,0;0,6", "4,-2;-2,4", "2,0;0,8"}) {
    HalfIntegralForm h = parse_form(s);
    for (long p : {2L, 3L, 5L}) {
      std::vector<Int> F = F_poly(h, p);
      REQUIRE(!F.empty());
      CHECK(F[0] == 1);
      // Degree is twice the conductor exponent at p.
      long fp = valuation(disc_split(D_of(h), 1).f, Int(p));
      CHECK(static_cast<long>(F.size()) == 2 * fp + 1);
    }
  }
  // p dividing D but not the conductor still gives the constant series.
  CHECK(F_poly(parse_form("2,0;0,6"), 3) == ints({1}));
  // p coprime to D gives the constant series.
  CHECK(F_poly(parse_form("2,1;1,2"), 5) == ints({1}));
}

TEST_CASE("normalized series is symmetric under X -> 1/X") {
  for (const char* s : {"2,0;0,8", "4,0;0,4", "2,0;0,6"}) {
    for (long p : {2L, 3L}) {
      LaurentPolyQuad Ft = F_tilde(parse_form(s), p);
      CHECK(invert_variable(Ft) == Ft);
    }
  }
}

TEST_CASE("degree guard on the gamma factor") {
  HalfIntegralForm h = parse_form("2,1;1,2");
  CHECK_THROWS_AS(gamma_poly(2, h, 3), UsageError);  // wrong half-size
  CHECK_NOTHROW(gamma_poly(1, h, 3));
}

TEST_CASE("integral weights across a conductor") {
  // phi(d) over d | conductor: value 1 at d = 1, and integral throughout.
  for (const char* s : {"2,0;0,8", "4,0;0,4", "2,0;0,6", "4,-2;-2,4"}) {
    HalfIntegralForm h = parse_form(s);
    PhiTable pt = phi_table(h);
    CHECK(pt.entries.at(Int(1)) == 1);
    CHECK(phi(Int(1), h) == 1);
  }
  CHECK(phi(Int(2), parse_form("2,0;0,8")) == 0);
  CHECK(phi(Int(2), parse_form("4,0;0,4")) == 2);
  // d must divide the conductor.
  CHECK_THROWS_AS(phi(Int(3), parse_form("2,0;0,8")), UsageError);
}

TEST_CASE("expansion identity holds with integral coefficients") {
  for (const char* s : {"2,0;0,8", "4,0;0,4", "2,0;0,6"}) {
    PhiExpansionReport rep = phi_expansion_check(parse_form(s));
    CHECK(rep.expansion_holds);
    CHECK(rep.integral);
    CHECK(rep.divisors_checked >= 2);
  }
}
