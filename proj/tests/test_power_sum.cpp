#include "specount/power_sum.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace specount;

namespace {

PsPolynomial p1(int n) { return ps_var(1, n); }
PsPolynomial p2(int n) { return ps_var(2, n); }

// Random sparse polynomial with small rational coefficients, for the
// algebraic-law checks below.
PsPolynomial random_poly(std::mt19937& rng, int truncation) {
  std::uniform_int_distribution<int> nterms(0, 6);
  std::uniform_int_distribution<int> idx(1, 4);
  std::uniform_int_distribution<int> expo(1, 3);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  PsPolynomial p = ps_zero(truncation);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    PowerSumMonomial m;
    int tries = nterms(rng) + 1;
    for (int j = 0; j < tries; ++j) {
      PowerSumMonomial cand = mono_mul(m, mono_var(idx(rng), expo(rng)));
      if (cand.weight() <= truncation) m = cand;
    }
    p = ps_add(p, ps_term(m, rational(num(rng), den(rng)), truncation));
  }
  return p;
}

}  // namespace

TEST_CASE("monomial weight") {
  CHECK(mono_unit().weight() == 0);
  CHECK(mono_var(1, 3).weight() == 3);
  CHECK(mono_mul(mono_var(1), mono_var(2)).weight() == 3);
  CHECK(mono_var(5, 2).weight() == 10);
}

TEST_CASE("monomial ordering is weight-major") {
  PowerSumMonomial a = mono_var(3);         // weight 3
  PowerSumMonomial b = mono_var(1, 2);      // weight 2
  CHECK(b < a);
  // Same weight: lexicographic on the part lists.
  PowerSumMonomial c = mono_mul(mono_var(1), mono_var(2));  // p1*p2
  PowerSumMonomial d = mono_var(3);                         // p3
  CHECK(c < d);
  CHECK_FALSE(d < c);
  CHECK_FALSE(c < c);
}

TEST_CASE("monomial multiplication merges exponents") {
  PowerSumMonomial m = mono_mul(mono_var(2), mono_mul(mono_var(1), mono_var(2)));
  REQUIRE(m.parts.size() == 2);
  CHECK(m.parts[0] == std::pair<int, int>(1, 1));
  CHECK(m.parts[1] == std::pair<int, int>(2, 2));
}

TEST_CASE("addition") {
  CHECK(ps_add(p1(5), p1(5)) == ps_term(mono_var(1), 2, 5));

  PsPolynomial a = ps_sub(ps_term(mono_var(1, 2), 1, 5), p2(5));  // p1^2 - p2
  CHECK(ps_add(a, p2(5)) == ps_term(mono_var(1, 2), 1, 5));

  PsPolynomial half_cube = ps_term(mono_var(1, 3), rational(1, 2), 5);
  CHECK(ps_add(half_cube, half_cube) == ps_term(mono_var(1, 3), 1, 5));
}

TEST_CASE("cancellation leaves no stored zeros") {
  PsPolynomial d = ps_sub(p1(5), p1(5));
  CHECK(d.is_zero());
  CHECK(d.terms.empty());
  ps_validate(d);
}

TEST_CASE("multiplication") {
  CHECK(ps_mul(p1(5), p1(5)) == ps_term(mono_var(1, 2), 1, 5));

  // Overweight product vanishes entirely.
  PsPolynomial sq = ps_term(mono_var(1, 2), 1, 2);
  CHECK(ps_mul(sq, p1(2)).is_zero());

  // (1/2)(p1^2 + p2) * p1 = (1/2)p1^3 + (1/2)p1*p2
  PsPolynomial z2 = ps_scale(ps_add(ps_term(mono_var(1, 2), 1, 5), p2(5)), rational(1, 2));
  PsPolynomial got = ps_mul(z2, p1(5));
  PsPolynomial want = ps_add(ps_term(mono_var(1, 3), rational(1, 2), 5),
                             ps_term(mono_mul(mono_var(1), mono_var(2)), rational(1, 2), 5));
  CHECK(got == want);
}

TEST_CASE("multiplication takes the minimum truncation") {
  PsPolynomial a = p1(10);
  PsPolynomial b = p1(4);
  CHECK(ps_mul(a, b).truncation == 4);
  CHECK(ps_mul(a, b, 3).truncation == 3);
  CHECK(ps_add(a, b).truncation == 4);
}

TEST_CASE("stretch") {
  CHECK(ps_stretch(p1(5), 2) == p2(5));
  PsPolynomial m = ps_term(mono_mul(mono_var(1), mono_var(2)), 1, 10);
  PsPolynomial want = ps_term(mono_mul(mono_var(2), mono_var(4)), 1, 10);
  CHECK(ps_stretch(m, 2) == want);
  PsPolynomial p = ps_add(p1(7), ps_term(mono_var(1, 3), rational(2, 3), 7));
  CHECK(ps_stretch(p, 1) == p);
  // Overweight images are dropped.
  CHECK(ps_stretch(ps_term(mono_var(1, 3), 1, 5), 2).is_zero());
}

TEST_CASE("stretch composes multiplicatively") {
  std::mt19937 rng(7001);
  for (int i = 0; i < 50; ++i) {
    PsPolynomial p = random_poly(rng, 24);
    CHECK(ps_stretch(ps_stretch(p, 2), 3) == ps_stretch(p, 6));
    CHECK(ps_stretch(ps_stretch(p, 3), 2) == ps_stretch(p, 6));
  }
}

TEST_CASE("valuation") {
  CHECK(ps_zero(5).valuation() == std::numeric_limits<int>::max());
  CHECK(ps_const(3, 5).valuation() == 0);
  CHECK(p1(5).valuation() == 1);
  PsPolynomial p = ps_add(ps_term(mono_var(2), 1, 9), ps_term(mono_var(1, 3), 1, 9));
  CHECK(p.valuation() == 2);
}

TEST_CASE("ring axioms on random values") {
  std::mt19937 rng(90210);
  for (int i = 0; i < 60; ++i) {
    PsPolynomial a = random_poly(rng, 10);
    PsPolynomial b = random_poly(rng, 10);
    PsPolynomial c = random_poly(rng, 10);
    CHECK(ps_add(a, b) == ps_add(b, a));
    CHECK(ps_mul(a, b) == ps_mul(b, a));
    CHECK(ps_add(ps_add(a, b), c) == ps_add(a, ps_add(b, c)));
    CHECK(ps_mul(ps_mul(a, b), c) == ps_mul(a, ps_mul(b, c)));
    CHECK(ps_mul(a, ps_add(b, c)) == ps_add(ps_mul(a, b), ps_mul(a, c)));
    // Additive inverse recovers the exact representation, not just equality.
    PsPolynomial back = ps_sub(ps_add(a, b), b);
    CHECK(back.terms == a.terms);
    ps_validate(ps_mul(a, b));
    ps_validate(ps_add(a, c));
  }
}

TEST_CASE("scalar multiples") {
  PsPolynomial p = ps_add(p1(6), ps_term(mono_var(2), rational(1, 2), 6));
  CHECK(ps_scale(p, 2) == ps_add(ps_term(mono_var(1), 2, 6), p2(6)));
  CHECK(ps_scale(p, 0).is_zero());
  CHECK(ps_scale(p, -1) == ps_negate(p));
}

TEST_CASE("term multiplication agrees with general multiplication") {
  std::mt19937 rng(5150);
  for (int i = 0; i < 40; ++i) {
    PsPolynomial p = random_poly(rng, 12);
    PowerSumMonomial m = mono_mul(mono_var(1 + i % 3), mono_var(2, i % 2 + 1));
    Rational c = rational(i % 5 - 2, 3);
    CHECK(ps_mul_term(p, m, c) == ps_mul(p, ps_term(m, c, 12)));
  }
}

TEST_CASE("equality compares at the common truncation") {
  PsPolynomial a = ps_add(p1(3), ps_term(mono_var(1, 3), 1, 3));
  PsPolynomial b = p1(2);  // agrees with a through weight 2
  CHECK(a == b);
  PsPolynomial c = ps_add(p1(2), ps_term(mono_var(2), 1, 2));
  CHECK_FALSE(a == c);
}

TEST_CASE("weight range extraction") {
  PsPolynomial p = ps_add(ps_add(ps_const(1, 9), p1(9)), ps_term(mono_var(1, 2), 3, 9));
  CHECK(ps_weight_range(p, 1, 1) == p1(9));
  CHECK(ps_weight_range(p, 0, 0) == ps_const(1, 9));
  CHECK(ps_weight_range(p, 3, 9).is_zero());
}

TEST_CASE("retruncation drops overweight terms") {
  PsPolynomial p = ps_add(p1(9), ps_term(mono_var(1, 4), 1, 9));
  PsPolynomial r = ps_retruncate(p, 2);
  CHECK(r.truncation == 2);
  CHECK(r.terms.size() == 1);
  ps_validate(r);
}

TEST_CASE("rendering") {
  CHECK(to_string(ps_zero(4)) == "0");
  CHECK(to_string(ps_const(1, 4)) == "1");
  PsPolynomial p = ps_add(ps_term(mono_var(1, 2), rational(1, 2), 6),
                          ps_term(mono_mul(mono_var(1), mono_var(2)), rational(-1, 3), 6));
  CHECK(to_string(p) == "1/2*p1^2 + -1/3*p1*p2");
}

TEST_CASE("exact rational arithmetic never normalizes away precision") {
  // 1/3 + 1/6 = 1/2 exactly.
  PsPolynomial p = ps_add(ps_term(mono_var(1), rational(1, 3), 4),
                          ps_term(mono_var(1), rational(1, 6), 4));
  CHECK(p.coefficient(mono_var(1)) == rational(1, 2));
  Rational q = p.coefficient(mono_var(1));
  CHECK(q.get_den() == 1 * 2);
}
