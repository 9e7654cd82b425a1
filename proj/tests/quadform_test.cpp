// Positive definite half-integral classes: encoding, discriminant
// splitting, reduction to canonical representatives, isometry testing,
// enumeration, and the local sign invariants.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <maasslift/quadform.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace ml;

TEST_CASE("form encoding round trip and validation") {
  HalfIntegralForm h = parse_form("2,1;1,2");
  CHECK(encode_form(h) == "2,1;1,2");
  CHECK(D_of(h) == 3);
  CHECK(parse_form("2") .T == IntMat{{Int(2)}});
  CHECK(D_of(parse_form("2")) == 1);  // odd size: half the determinant
  CHECK(D_of(parse_form("2,0;0,8")) == 16);

  CHECK_THROWS_AS(parse_form("2,1;1"), UsageError);      // ragged rows
  CHECK_THROWS_AS(parse_form("1,0;0,2"), UsageError);    // odd diagonal
  CHECK_THROWS_AS(parse_form("2,0;1,2"), UsageError);    // asymmetric
  CHECK_THROWS_AS(parse_form("2,3;3,2"), UsageError);    // indefinite
  CHECK_THROWS_AS(make_form({{Int(-2)}}), UsageError);   // negative definite
}

TEST_CASE("discriminant admissibility and splitting") {
  // size-2 classes exist exactly at D = 0,3 mod 4; size-1 at D = 0,1 mod 4.
  CHECK(is_disc_value(Int(3), 1));
  CHECK(is_disc_value(Int(4), 1));
  CHECK_FALSE(is_disc_value(Int(5), 1));
  CHECK(is_disc_value(Int(5), 2));
  CHECK_FALSE(is_disc_value(Int(7), 2));

  // 16 at n = 1 splits off the fundamental part 4 with conductor 2.
  DiscriminantData d16 = disc_split(Int(16), 1);
  CHECK(d16.d == 4);
  CHECK(d16.f == 2);
  DiscriminantData d12 = disc_split(Int(12), 1);
  CHECK(d12.d == 3);
  CHECK(d12.f == 2);
  DiscriminantData d3 = disc_split(Int(3), 1);
  CHECK(d3.d == 3);
  CHECK(d3.f == 1);
  // at n = 2 the sign flips: 16 = 1 * 4^2 over the positive progression.
  DiscriminantData e16 = disc_split(Int(16), 2);
  CHECK(e16.d == 1);
  CHECK(e16.f == 4);
  CHECK_THROWS_AS(disc_split(Int(5), 1), UsageError);
}

TEST_CASE("canonical reduction is a class invariant") {
  // A unimodular change of basis of the D=3 class reduces back to it.
  HalfIntegralForm moved = make_form({{Int(2), Int(3)}, {Int(3), Int(6)}});
  CHECK(encode_form(canonical_reduce(moved)) == "2,-1;-1,2");
  // Already-canonical representatives are fixed points.
  for (const char* s : {"2,-1;-1,2", "2,0;0,2", "2,-1;-1,4", "4,-2;-2,4"}) {
    HalfIntegralForm h = parse_form(s);
    CHECK(encode_form(canonical_reduce(h)) == s);
  }
}

TEST_CASE("isometry testing") {
  CHECK(isometric(parse_form("2,0;0,4"), parse_form("4,0;0,2")));
  CHECK(isometric(parse_form("2,1;1,2"), parse_form("2,-1;-1,2")));
  CHECK_FALSE(isometric(parse_form("2,0;0,4"), parse_form("2,1;1,4")));
  // Same determinant, different classes: the two D=12 binary classes.
  CHECK_FALSE(isometric(parse_form("2,0;0,6"), parse_form("4,-2;-2,4")));
}

TEST_CASE("representation counts") {
  CHECK(repr_counts({{Int(2)}}, 3) == std::vector<long>{2, 0, 0});
  // The D=3 binary class represents 1 six times (hexagonal lattice).
  CHECK(repr_counts(parse_form("2,1;1,2").T, 2) == std::vector<long>{6, 0});
  CHECK(repr_counts(parse_form("2,0;0,2").T, 2) == std::vector<long>{4, 4});
}

TEST_CASE("binary enumeration up to D = 20") {
  std::vector<HalfIntegralForm> got = enumerate_forms(2, Int(20));
  std::vector<std::string> enc;
  for (const auto& h : got) enc.push_back(encode_form(h));
  // Ascending D, then lexicographic encoding; one entry per class.
  std::vector<std::string> want = {
      "2,-1;-1,2", "2,0;0,2", "2,-1;-1,4", "2,0;0,4",  "2,-1;-1,6",
      "2,0;0,6",   "4,-2;-2,4", "2,-1;-1,8", "4,-1;-1,4", "2,0;0,8",
      "4,0;0,4",   "2,-1;-1,10", "2,0;0,10", "4,-2;-2,6"};
  CHECK(enc == want);
  // Representatives are canonical fixed points.
  for (const auto& h : got) CHECK(encode_form(canonical_reduce(h)) == encode_form(h));
  // The enumeration must not depend on the scan slack.
  std::vector<HalfIntegralForm> slack = enumerate_forms(2, Int(20), Rational(3, 2));
  REQUIRE(slack.size() == got.size());
  for (size_t i = 0; i < got.size(); ++i)
    CHECK(encode_form(slack[i]) == encode_form(got[i]));
}

TEST_CASE("achieved discriminants, size 4 small range") {
  std::vector<HalfIntegralForm> got = enumerate_forms(4, Int(5));
  REQUIRE(got.size() == 2);
  CHECK(D_of(got[0]) == 4);
  CHECK(D_of(got[1]) == 5);
  // No size-4 class has discriminant 1 (the progression starts at 4).
  CHECK(enumerate_forms(4, Int(3)).empty());
}

TEST_CASE("prime-discriminant search") {
  for (long m : {1L, 3L}) {
    for (long p : {2L, 3L, 5L, 7L}) {
      HalfIntegralForm B = find_prime_disc_form(p, m);
      CHECK(static_cast<long>(B.T.size()) == m);
      CHECK(D_of(B) == p);
    }
  }
  CHECK(encode_form(find_prime_disc_form(3, 1)) == "6");
}

TEST_CASE("local signs of odd-rank even lattices") {
  // The convention switch changes eta_v exactly by the factor
  // (det S, -1)_v, so it is visible only at v where that symbol is -1.
  EvenLattice L = make_even_lattice(parse_form("6").T);  // det 6
  // (6,-1)_3 = -1, (6,-1)_7 = +1.
  CHECK(eta(L, 3) != eta_variant(L, 3, false));
  CHECK(eta(L, 7) == eta_variant(L, 7, false));
  CHECK(eta(L, 3) == eta_variant(L, 3, true));

  // The sign invariant is defined only for odd sizes.
  EvenLattice even_size = make_even_lattice(parse_form("2,0;0,2").T);
  CHECK_THROWS_AS(eta(even_size, 2), UsageError);
}
