#pragma once

// Cycle indices equivariant under the two-element group {e, tau}, where
// tau is an order- or orientation-reversing involution on structures.
// A value carries one ordinary series per group element:
//
//   part_e    — fixed points of plain relabelings (the underlying species)
//   part_tau  — fixed points of (reverse then relabel)
//
// The quotient by the group averages the two parts and counts orbits,
// i.e. structures up to reversal.  Composition twists the tau part: a
// cycle of length i in the outer permutation applies tau^i to the inner
// structures it permutes, so odd-length cycles see the reversed inner
// species and even-length cycles the plain one.

#include "specount/cycle_index.hpp"

namespace specount {

struct S2Series {
  CycleIndexSeries part_e;
  CycleIndexSeries part_tau;

  int truncation() const { return std::min(part_e.truncation(), part_tau.truncation()); }
  int valuation() const { return std::min(part_e.valuation(), part_tau.valuation()); }
  bool is_zero() const { return part_e.is_zero() && part_tau.is_zero(); }
  bool polynomial() const { return part_e.exact_polynomial && part_tau.exact_polynomial; }
};

inline S2Series s2_zero(int truncation) {
  return {cis_zero(truncation), cis_zero(truncation)};
}

inline S2Series s2_const(const Rational& c, int truncation) {
  return {cis_const(c, truncation), cis_const(c, truncation)};
}

// Lift a series on which reversal acts trivially.
inline S2Series s2_trivial(const CycleIndexSeries& f) { return {f, f}; }

inline S2Series s2_retruncate(const S2Series& a, int truncation) {
  return {{ps_retruncate(a.part_e.poly, truncation), a.part_e.exact_polynomial},
          {ps_retruncate(a.part_tau.poly, truncation), a.part_tau.exact_polynomial}};
}

inline bool operator==(const S2Series& a, const S2Series& b) {
  return a.part_e == b.part_e && a.part_tau == b.part_tau;
}

inline S2Series g_add(const S2Series& a, const S2Series& b) {
  return {cis_add(a.part_e, b.part_e), cis_add(a.part_tau, b.part_tau)};
}

inline S2Series g_sub(const S2Series& a, const S2Series& b) {
  return {cis_sub(a.part_e, b.part_e), cis_sub(a.part_tau, b.part_tau)};
}

inline S2Series g_scale(const S2Series& a, const Rational& c) {
  return {cis_scale(a.part_e, c), cis_scale(a.part_tau, c)};
}

// Product structures transform diagonally, so each part multiplies
// independently.
inline S2Series g_mul(const S2Series& a, const S2Series& b,
                      int target_truncation = std::numeric_limits<int>::max()) {
  return {cis_mul(a.part_e, b.part_e, target_truncation),
          cis_mul(a.part_tau, b.part_tau, target_truncation)};
}

namespace detail {

// Inner series seen by a length-i outer cycle on the tau side: tau^i is
// tau for odd i and the identity for even i.
inline std::function<const PsPolynomial&(int)> parity_base(const S2Series& g) {
  return [&g](int i) -> const PsPolynomial& {
    return (i % 2 == 1) ? g.part_tau.poly : g.part_e.poly;
  };
}

}  // namespace detail

// Equivariant composition.  The e part is ordinary plethysm; the tau
// part substitutes stretch(G[tau^i], i) for p_i.
inline S2Series g_plethysm(const S2Series& f, const S2Series& g) {
  int n = std::min(f.truncation(), g.truncation());
  if (g.valuation() < 1 && !f.polynomial())
    throw std::invalid_argument(
        "g_plethysm: inner series has a constant term and outer is not a polynomial");
  CycleIndexSeries e = plethysm(f.part_e, g.part_e);
  detail::SubstitutionEngine engine(detail::parity_base(g), n);
  PsPolynomial tau = engine.run(f.part_tau.poly);
  int inner_max = std::max({g.part_e.max_weight(), g.part_tau.max_weight(), 1});
  bool tau_exact = f.polynomial() && g.part_e.exact_polynomial &&
                   g.part_tau.exact_polynomial &&
                   f.part_tau.max_weight() * inner_max <= n;
  return {std::move(e), {std::move(tau), tau_exact}};
}

// Equivariant composition with the set species outside (trivial action
// on the set of inner structures, tau applied inside each).
inline S2Series g_exp_compose(const S2Series& g) {
  if (g.valuation() < 1)
    throw std::invalid_argument("g_exp_compose: inner series must have zero constant term");
  int n = g.truncation();
  CycleIndexSeries e = exp_compose({ps_retruncate(g.part_e.poly, n), false});
  detail::SubstitutionEngine engine(detail::parity_base(g), n);
  return {std::move(e), {engine.run_exp(), false}};
}

// Per-element formal derivative: a distinguished atom is untouched by
// reversal, so each part differentiates independently.
inline S2Series g_derivative(const S2Series& f) {
  return {derivative(f.part_e), derivative(f.part_tau)};
}

// Orbit counting: structures up to reversal.
inline CycleIndexSeries quotient_s2(const S2Series& a) {
  return cis_scale(cis_add(a.part_e, a.part_tau), rational(1, 2));
}

// ---------------------------------------------------------------------
// Built-ins with the order-reversing action

inline S2Series g_x(int truncation) {
  return s2_trivial(builtin_x(truncation));
}

inline S2Series g_e(int truncation) {
  return s2_trivial(builtin_e(truncation));
}

inline S2Series g_e_n(int n, int truncation) {
  return s2_trivial(builtin_e_n(n, truncation));
}

// Linear orders of length n, tau = reversal.  A permutation composed
// with reversal fixes an order exactly when it realizes the reversal,
// which forces the cycle structure below.
inline S2Series g_l(int n, int truncation) {
  if (n < 0) throw std::invalid_argument("g_l: negative length");
  CycleIndexSeries e = builtin_l(n, truncation);
  if (n > truncation) return {std::move(e), {ps_zero(truncation), false}};
  PowerSumMonomial m = (n % 2 == 0)
                           ? mono_var(2, n / 2)
                           : mono_mul(mono_var(1), mono_var(2, (n - 1) / 2));
  return {std::move(e), {ps_term(m, 1, truncation), true}};
}

// Cyclic orders of length n, tau = reflection.
inline S2Series g_c(int n, int truncation) {
  if (n < 1) throw std::invalid_argument("g_c: length must be >= 1");
  CycleIndexSeries e = builtin_c(n, truncation);
  if (n > truncation) return {std::move(e), {ps_zero(truncation), false}};
  PsPolynomial tau = ps_zero(truncation);
  if (n % 2 == 1) {
    tau = ps_term(mono_mul(mono_var(1), mono_var(2, (n - 1) / 2)), 1, truncation);
  } else {
    tau = ps_add(ps_term(mono_mul(mono_var(1, 2), mono_var(2, (n - 2) / 2)),
                         rational(1, 2), truncation),
                 ps_term(mono_var(2, n / 2), rational(1, 2), truncation));
  }
  return {std::move(e), {std::move(tau), true}};
}

// Cyclic orders of every length >= k, materialized up to the
// truncation; longer cycles cannot contribute once a positive-valuation
// series is substituted, so the finite sum behaves as the whole value
// in composition.  It is still a truncation, hence never marked as a
// complete polynomial.
inline S2Series g_c_ge(int k, int truncation) {
  S2Series acc = s2_zero(truncation);
  for (int n = k; n <= truncation; ++n) acc = g_add(acc, g_c(n, truncation));
  acc.part_e.exact_polynomial = acc.part_tau.exact_polynomial = false;
  return acc;
}

}  // namespace specount
