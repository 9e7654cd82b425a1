// Exact-arithmetic foundations: integer/rational helpers, the quadratic
// field layer, Laurent polynomials, q-expansions, hashing, and the
// deterministic fork-join helper.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <maasslift/laurent.hpp>
#include <maasslift/numbers.hpp>
#include <maasslift/parallel.hpp>
#include <maasslift/qexp.hpp>
#include <maasslift/quadext.hpp>
#include <maasslift/sha256.hpp>

#include <string>
#include <vector>

using namespace ml;

TEST_CASE("integer helpers") {
  CHECK(pow_int(Int(3), 5) == 243);
  CHECK(pow_int(Int(2), 0) == 1);
  CHECK(pow_rat(Rational(1, 2), -3) == Rational(8));

  CHECK(valuation(Int(48), Int(2)) == 4);
  CHECK(valuation(Int(48), Int(3)) == 1);
  CHECK(valuation(Int(7), Int(5)) == 0);

  CHECK(is_square(Int(49)));
  CHECK_FALSE(is_square(Int(48)));
  CHECK(isqrt(Int(17)) == 4);
  CHECK(isqrt(Int(16)) == 4);
  CHECK(isqrt(Int(0)) == 0);

  auto f = factor(Int(360));
  REQUIRE(f.size() == 3);
  CHECK(f[0] == std::pair<Int, long>(Int(2), 3));
  CHECK(f[1] == std::pair<Int, long>(Int(3), 2));
  CHECK(f[2] == std::pair<Int, long>(Int(5), 1));

  auto d = divisors(Int(12));
  CHECK(d == std::vector<Int>{Int(1), Int(2), Int(3), Int(4), Int(6), Int(12)});

  CHECK(is_prime(Int(2)));
  CHECK(is_prime(Int(97)));
  CHECK_FALSE(is_prime(Int(1)));
  CHECK_FALSE(is_prime(Int(91)));

  CHECK(primes_up_to(20) == std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19});
}

TEST_CASE("kronecker symbol") {
  CHECK(kronecker(Int(2), Int(7)) == 1);
  CHECK(kronecker(Int(3), Int(5)) == -1);
  CHECK(kronecker(Int(-1), Int(5)) == 1);
  CHECK(kronecker(Int(-1), Int(3)) == -1);
  CHECK(kronecker(Int(6), Int(3)) == 0);
  // (x/2) cases: 0 for even x, (-1)^((x^2-1)/8) for odd x.
  CHECK(kronecker(Int(2), Int(2)) == 0);
  CHECK(kronecker(Int(7), Int(2)) == 1);
  CHECK(kronecker(Int(3), Int(2)) == -1);
  CHECK(kronecker(Int(-4), Int(3)) == -1);
}

TEST_CASE("rational parsing round trip") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(rational_str(Rational(-22, 8)) == "-11/4");
  CHECK(rational_str(Rational(5)) == "5");
  CHECK(parse_rational(rational_str(Rational(-355, 113))) == Rational(-355, 113));
  CHECK_THROWS_AS(parse_rational("abc"), UsageError);
  CHECK_THROWS_AS(to_long(pow_int(Int(2), 80)), std::overflow_error);
}

TEST_CASE("quadratic field arithmetic") {
  QuadExt a(2, Rational(1), Rational(1));  // 1 + sqrt 2
  QuadExt sq = a * a;                      // 3 + 2 sqrt 2
  CHECK(sq.p == 2);
  CHECK(sq.rat == Rational(3));
  CHECK(sq.irr == Rational(2));

  QuadExt inv = quadext_inv(a);  // -1 + sqrt 2
  CHECK(inv * a == QuadExt(Rational(1)));

  // Rational-tagged values (p = 0) combine with any field.
  QuadExt r(Rational(5, 3));
  CHECK((r + a).p == 2);
  CHECK((r * a).rat == Rational(5, 3));

  // Mixing distinct irrational fields must be rejected.
  QuadExt b(3, Rational(0), Rational(1));
  CHECK_THROWS_AS(a + b, UsageError);

  // p^{e/2} for even and odd e, including negative exponents.
  CHECK(sqrtp_power(2, 2) == QuadExt(Rational(2)));
  CHECK(sqrtp_power(2, 1) == QuadExt(2, Rational(0), Rational(1)));
  CHECK(sqrtp_power(2, -2) == QuadExt(Rational(1, 2)));
  CHECK(sqrtp_power(3, -1) == QuadExt(3, Rational(0), Rational(1, 3)));
  CHECK(sqrtp_power(3, 1) * sqrtp_power(3, -1) == QuadExt(Rational(1)));
}

TEST_CASE("Laurent polynomials over Q(sqrt p)") {
  // P = X + X^{-1} + 3
  LaurentPolyQuad P(5);
  P.set_coeff(1, QuadExt(Rational(1)));
  P.set_coeff(-1, QuadExt(Rational(1)));
  P.set_coeff(0, QuadExt(Rational(3)));
  CHECK(P.min_exp() == -1);
  CHECK(P.max_exp() == 1);

  CHECK(invert_variable(P) == P);            // symmetric support
  CHECK(invert_variable(invert_variable(P)) == P);

  // Evaluation at sqrt 5: sqrt5 + 1/sqrt5 + 3 = 3 + (6/5) sqrt5.
  QuadExt v = laurent_eval(P, sqrtp_power(5, 1));
  CHECK(v == QuadExt(5, Rational(3), Rational(6, 5)));

  // Y-coordinates: P = Y + 3 with Y = X + X^{-1}.
  auto y = symmetric_to_Y(P);
  REQUIRE(y.size() == 2);
  CHECK(y[0] == QuadExt(Rational(3)));
  CHECK(y[1] == QuadExt(Rational(1)));

  // Asymmetric input is rejected.
  LaurentPolyQuad Q(5);
  Q.set_coeff(1, QuadExt(Rational(1)));
  CHECK_THROWS_AS(symmetric_to_Y(Q), UsageError);

  // Product: (X + X^{-1})^2 = X^2 + 2 + X^{-2}.
  LaurentPolyQuad Y = laurent_monomial(5, 1, QuadExt(Rational(1))) +
                      laurent_monomial(5, -1, QuadExt(Rational(1)));
  LaurentPolyQuad Y2 = Y * Y;
  CHECK(Y2.coeff(2) == QuadExt(Rational(1)));
  CHECK(Y2.coeff(0) == QuadExt(Rational(2)));
  CHECK(Y2.coeff(-2) == QuadExt(Rational(1)));
  CHECK(Y2.coeff(1).is_zero());

  // Zero coefficients are dropped from storage.
  LaurentPolyQuad Z = Y - Y;
  CHECK(Z.is_zero());
}

TEST_CASE("q-expansions") {
  QExpansion one(6);
  one.coeff(0) = 1;
  QExpansion q(6);
  q.coeff(1) = 1;

  QExpansion prod = (one + q) * (one - q);  // 1 - q^2
  CHECK(prod.coeff(0) == 1);
  CHECK(prod.coeff(1) == 0);
  CHECK(prod.coeff(2) == -1);

  QExpansion p8 = qexp_pow(one + q, 8);  // binomial coefficients
  CHECK(p8.coeff(3) == 56);
  CHECK(p8.coeff(5) == 56);

  QExpansion scaled = Rational(3) * q;
  CHECK(qexp_div_exact(scaled, Int(3)).coeff(1) == 1);

  CHECK(agree(prod, prod));
  QExpansion shorter(3);
  shorter.coeff(0) = 1;
  shorter.coeff(2) = -1;
  CHECK(agree(prod, shorter));  // equality on the common precision
  shorter.coeff(2) = 5;
  CHECK_FALSE(agree(prod, shorter));

  CHECK_THROWS_AS(QExpansion(0), UsageError);
  CHECK_THROWS_AS(one.coeff(6), UsageError);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::string a1000(1000, 'a');
  CHECK(sha256_hex(a1000) ==
        "41edece42d63e8d9bf515a9ba6932e1c20cbc9f5a5d134645adb5db1b9737ea3");
}

TEST_CASE("deterministic fork-join") {
  // The merged result must not depend on the thread count.
  auto run = [](long nthreads) {
    set_thread_count(nthreads);
    std::vector<long> acc;
    parallel_tasks<std::vector<long>>(
        100, acc,
        [](long i) { return std::vector<long>{i * i}; },
        [](std::vector<long>& a, std::vector<long>& r) {
          a.insert(a.end(), r.begin(), r.end());
        });
    set_thread_count(0);
    return acc;
  };
  auto serial = run(1);
  REQUIRE(serial.size() == 100);
  CHECK(serial[10] == 100);
  CHECK(run(4) == serial);
  CHECK(run(7) == serial);
}
