#include "specount/cycle_index.hpp"

#include "specount/counts.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

using namespace specount;

namespace {

// --- tiny exhaustive checkers used to validate the closed-form built-ins ---

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(p); while (std::next_permutation(p.begin(), p.end()));
  return out;
}

PowerSumMonomial cycle_type(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  PowerSumMonomial m;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) { seen[j] = true; j = perm[j]; ++len; }
    m = mono_mul(m, mono_var(len));
  }
  return m;
}

// Averaged fixed-point count over S_n: (1/n!) sum_sigma |Fix(sigma)| p_type(sigma),
// with |Fix| supplied per permutation.  This is the definition the closed
// forms must reproduce.
template <class FixCount>
PsPolynomial averaged_fixed_points(int n, int truncation, FixCount fix) {
  PsPolynomial acc = ps_zero(truncation);
  Rational inv_fact = rational(1, 1) / Rational(factorial(n));
  for (const auto& perm : all_permutations(n)) {
    long f = fix(perm);
    if (f != 0)
      acc = ps_add(acc, ps_term(cycle_type(perm), Rational(f) * inv_fact, truncation));
  }
  return acc;
}

// Linear orders on [n] fixed by relabeling: sigma fixes (w_1..w_n) iff
// sigma(w_i) = w_i for all i, i.e. sigma = id.
long fixed_linear_orders(const std::vector<int>& perm) {
  for (int i = 0; i < static_cast<int>(perm.size()); ++i)
    if (perm[i] != i) return 0;
  long f = 1;
  for (int i = 2; i <= static_cast<int>(perm.size()); ++i) f *= i;
  return f;
}

// Cyclic orders = linear orders modulo rotation; count orbits fixed by sigma.
long fixed_cyclic_orders(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  if (n == 1) return 1;
  std::vector<int> w(n);
  std::iota(w.begin(), w.end(), 0);
  long count = 0;
  std::vector<int> img(n), rot(n);
  do {
    if (w[0] != 0) continue;  // one representative per rotation orbit
    for (int i = 0; i < n; ++i) img[i] = perm[w[i]];
    bool fixed = false;
    for (int r = 0; r < n && !fixed; ++r) {
      for (int i = 0; i < n; ++i) rot[i] = img[(i + r) % n];
      fixed = rot == w;
    }
    if (fixed) ++count;
  } while (std::next_permutation(w.begin(), w.end()));
  return count;
}

CycleIndexSeries random_series(std::mt19937& rng, int truncation, int min_valuation) {
  std::uniform_int_distribution<int> nterms(1, 5);
  std::uniform_int_distribution<int> idx(1, 3);
  std::uniform_int_distribution<long> num(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  PsPolynomial p = ps_zero(truncation);
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    PowerSumMonomial m;
    do {
      m = mono_mul(m, mono_var(idx(rng)));
    } while (m.weight() < min_valuation ||
             (nterms(rng) > 2 && m.weight() < truncation));
    if (m.weight() > truncation) continue;
    p = ps_add(p, ps_term(m, rational(num(rng), den(rng)), truncation));
  }
  return cis_from_poly(std::move(p));
}

}  // namespace

TEST_CASE("built-in singleton and linear orders") {
  CHECK(builtin_x(5).poly == ps_var(1, 5));
  CHECK(builtin_l(2, 8).poly == ps_term(mono_var(1, 2), 1, 8));
  CHECK(builtin_l(0, 8).poly == ps_const(1, 8));
  for (int n = 1; n <= 6; ++n) {
    PsPolynomial expected = averaged_fixed_points(n, 8, fixed_linear_orders);
    CHECK(builtin_l(n, 8).poly == expected);
  }
}

TEST_CASE("built-in cyclic orders match exhaustive fixed-point counting") {
  CHECK(builtin_c(3, 8).poly ==
        ps_add(ps_term(mono_var(1, 3), rational(1, 3), 8),
               ps_term(mono_var(3), rational(2, 3), 8)));
  for (int n = 1; n <= 6; ++n) {
    PsPolynomial expected = averaged_fixed_points(n, 8, fixed_cyclic_orders);
    CHECK(builtin_c(n, 8).poly == expected);
  }
}

TEST_CASE("built-in set species") {
  CycleIndexSeries e = builtin_e(6);
  // Every permutation fixes the unique set structure.
  for (int n = 1; n <= 6; ++n) {
    PsPolynomial expected =
        averaged_fixed_points(n, 6, [](const std::vector<int>&) { return 1L; });
    CHECK(layer(e, n) == expected);
  }
  // Frozen expansion through weight 3.
  PsPolynomial want = ps_const(1, 3);
  want = ps_add(want, ps_var(1, 3));
  want = ps_add(want, ps_scale(ps_add(ps_term(mono_var(1, 2), 1, 3), ps_var(2, 3)),
                               rational(1, 2)));
  want = ps_add(want, ps_term(mono_var(1, 3), rational(1, 6), 3));
  want = ps_add(want, ps_term(mono_mul(mono_var(1), mono_var(2)), rational(1, 2), 3));
  want = ps_add(want, ps_term(mono_var(3), rational(1, 3), 3));
  CHECK(ps_retruncate(e.poly, 3) == want);

  CountsTable t = counts_from_series(e, 6);
  for (int n = 0; n <= 6; ++n) {
    CHECK(t.labeled[n] == 1);
    CHECK(t.unlabeled[n] == 1);
  }
}

TEST_CASE("sets of fixed size") {
  CHECK(builtin_e_n(2, 6) ==
        cis_from_poly(ps_scale(ps_add(ps_term(mono_var(1, 2), 1, 6), ps_var(2, 6)),
                               rational(1, 2))));
  CHECK(builtin_e_n(0, 6).poly == ps_const(1, 6));
  CHECK(builtin_e_n(9, 6).is_zero());
}

TEST_CASE("plethysm identities") {
  std::mt19937 rng(424242);
  CycleIndexSeries x = builtin_x(8);
  for (int i = 0; i < 25; ++i) {
    CycleIndexSeries f = random_series(rng, 8, 0);
    CHECK(plethysm(f, x) == f);
    CycleIndexSeries g = random_series(rng, 8, 1);
    CHECK(plethysm(x, g) == g);
  }
  // p2 composed with (p1 + p2): the stretch rule.
  CycleIndexSeries p2 = cis_from_poly(ps_var(2, 8), true);
  CycleIndexSeries inner = cis_from_poly(ps_add(ps_var(1, 8), ps_var(2, 8)));
  CHECK(plethysm(p2, inner).poly == ps_add(ps_var(2, 8), ps_var(4, 8)));
}

TEST_CASE("plethysm associativity on random series") {
  std::mt19937 rng(777);
  for (int i = 0; i < 40; ++i) {
    CycleIndexSeries f = random_series(rng, 8, 1);
    CycleIndexSeries g = random_series(rng, 8, 1);
    CycleIndexSeries h = random_series(rng, 8, 1);
    CHECK(plethysm(plethysm(f, g), h) == plethysm(f, plethysm(g, h)));
  }
}

TEST_CASE("polynomial outer accepts constant-term inner") {
  CycleIndexSeries inner = cis_from_poly(ps_add(ps_const(1, 6), ps_var(1, 6)));
  // L2(1 + p1) = (1 + p1)^2
  PsPolynomial sq = ps_add(ps_add(ps_const(1, 6), ps_scale(ps_var(1, 6), 2)),
                           ps_term(mono_var(1, 2), 1, 6));
  CHECK(plethysm(builtin_l(2, 6), inner).poly == sq);
  // p2(1 + p1) = 1 + p2
  CycleIndexSeries p2 = cis_from_poly(ps_var(2, 6), true);
  CHECK(plethysm(p2, inner).poly == ps_add(ps_const(1, 6), ps_var(2, 6)));
  // An infinite outer with a constant-term inner cannot be evaluated.
  CHECK_THROWS_AS(plethysm(builtin_e(6), inner), std::invalid_argument);
}

TEST_CASE("exponential composition") {
  CHECK(exp_compose(cis_zero(5)).poly == ps_const(1, 5));
  CHECK(exp_compose(builtin_x(6)) == builtin_e(6));
  CHECK_THROWS_AS(exp_compose(cis_const(1, 5)), std::invalid_argument);

  std::mt19937 rng(1618);
  CycleIndexSeries e = builtin_e(8);
  for (int i = 0; i < 30; ++i) {
    CycleIndexSeries g = random_series(rng, 8, 1);
    CHECK(exp_compose(g) == plethysm(e, g));
  }
}

TEST_CASE("sets of singletons have one structure per size") {
  CycleIndexSeries f = plethysm(builtin_e(10), builtin_x(10));
  for (int n = 0; n <= 10; ++n) {
    CHECK(labeled_count(f, n) == 1);
    CHECK(unlabeled_count(f, n) == 1);
  }
}

TEST_CASE("derivative") {
  CycleIndexSeries cube = cis_from_poly(ps_term(mono_var(1, 3), 1, 6), true);
  CHECK(derivative(cube).poly == ps_term(mono_var(1, 2), 3, 6));
  CycleIndexSeries p2 = cis_from_poly(ps_var(2, 6), true);
  CHECK(derivative(p2).is_zero());

  // E' = E, checked layerwise.
  CycleIndexSeries e = builtin_e(7);
  CycleIndexSeries de = derivative(e);
  CHECK(de.truncation() == 6);
  CHECK(de == e);
}

TEST_CASE("derivative truncation semantics") {
  CycleIndexSeries poly = cis_from_poly(ps_term(mono_var(1, 2), 1, 5), true);
  CHECK(derivative(poly).truncation() == 5);
  CycleIndexSeries open = cis_from_poly(ps_term(mono_var(1, 2), 1, 5), false);
  CHECK(derivative(open).truncation() == 4);
}

TEST_CASE("derivative satisfies the Leibniz rule") {
  std::mt19937 rng(31337);
  for (int i = 0; i < 30; ++i) {
    CycleIndexSeries f = random_series(rng, 9, 0);
    CycleIndexSeries g = random_series(rng, 9, 0);
    CycleIndexSeries lhs = derivative(cis_mul(f, g));
    CycleIndexSeries rhs =
        cis_add(cis_mul(derivative(f), g), cis_mul(f, derivative(g)));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("layer restriction") {
  CycleIndexSeries e = builtin_e(6);
  CHECK(restrict_layers(e, 2, 2) == builtin_e_n(2, 6));
  CHECK(restrict_layers(e, 0, 6) == e);
  CHECK(restrict_layers(e, 1, 0).is_zero());
  CHECK(restrict_layers(e, 2, 4).exact_polynomial);
  CHECK_THROWS_AS(restrict_layers(e, 0, 7), std::invalid_argument);
}

TEST_CASE("count extraction on the unordered pair") {
  CycleIndexSeries pair = builtin_e_n(2, 4);
  CHECK(labeled_count(pair, 2) == 1);
  CHECK(unlabeled_count(pair, 2) == 1);
  CHECK(labeled_count(pair, 3) == 0);
}

TEST_CASE("count extraction rejects non-species values") {
  CycleIndexSeries bad = cis_from_poly(ps_term(mono_var(1), rational(1, 3), 4));
  CHECK_THROWS_AS(labeled_count(bad, 1), integrity_error);
  CycleIndexSeries neg = cis_from_poly(ps_scale(ps_var(1, 4), -1));
  CHECK_THROWS_AS(labeled_count(neg, 1), integrity_error);
  CHECK_THROWS_AS(unlabeled_count(neg, 1), integrity_error);
}

TEST_CASE("series addition and multiplication bookkeeping") {
  CycleIndexSeries a = builtin_l(2, 4);   // exact, max weight 2
  CycleIndexSeries b = builtin_l(3, 4);   // exact, max weight 3
  CHECK(cis_add(a, b).exact_polynomial);
  CHECK_FALSE(cis_mul(a, b).exact_polynomial);  // weight 5 lost at truncation 4
  CHECK(cis_mul(a, b).poly.is_zero());
  CHECK(cis_mul(a, a).exact_polynomial);
  CHECK(cis_mul(a, a).poly == ps_term(mono_var(1, 4), 1, 4));
}
