#pragma once

// Solvers for 2-trees assembled from polygons glued edge-to-edge, in
// coherently-oriented (equivariant) form, together with the quotient
// that forgets orientation.
//
// The recursion is anchored at a base edge with unlabeled endpoints.
// A sheet on that edge is one polygon containing it: choosing the
// polygon size n+2 leaves a linear order of n fresh vertices and n+1
// further edges, each carrying its own anchored structure.  Reversal
// flips the vertex order, the edge order, and every structure below —
// which is exactly the twisted arithmetic of S2Series.
//
// Unrooted series come out of the rooted ones by the dissymmetry
// identity: rooting at an edge, plus rooting at a polygon, minus
// rooting at an incident polygon-edge pair.

#include "specount/counts.hpp"
#include "specount/s2_series.hpp"

#include <optional>

namespace specount {

// Which polygon sizes may appear: any size >= 3, or exactly k.
struct PolygonMode {
  int k = 0;  // 0 = all sizes
  bool all_sizes() const { return k == 0; }
};

inline PolygonMode any_polygon() { return {0}; }

inline PolygonMode only_kgon(int k) {
  if (k < 3) throw std::invalid_argument("only_kgon: polygons need at least 3 vertices");
  return {k};
}

namespace detail {

inline PsPolynomial ps_pow(const PsPolynomial& p, int e, int truncation) {
  PsPolynomial r = ps_const(1, truncation);
  for (int i = 0; i < e; ++i) r = ps_mul(r, p, truncation);
  return r;
}

}  // namespace detail

// Sum over sheets on the base edge.  With A the anchored series, the
// size-(n+2) polygon contributes L_n(X) * L_{n+1}(A); n fresh vertices
// give the weight-n monomial factor and the other n+1 edges each carry
// an anchored structure.  In the single-size mode only n = k-2 remains.
//
// The tau parts use the order-reversal series of the two linear orders:
// a length-2 cycle of the reversal sees the plain anchored series
// stretched by 2 (written B below), a fixed point sees the reversed one.
inline S2Series sheet_sum(const S2Series& a, PolygonMode mode) {
  int big_n = a.truncation();
  const PsPolynomial& ae = a.part_e.poly;
  const PsPolynomial& at = a.part_tau.poly;
  PsPolynomial b = ps_stretch(ae, 2);

  PsPolynomial sum_e = ps_zero(big_n);
  PsPolynomial sum_tau = ps_zero(big_n);

  auto tau_mono = [](int n) {
    // Reversal of the n fresh vertices: one fixed point iff n is odd.
    return (n % 2 == 0) ? mono_var(2, n / 2)
                        : mono_mul(mono_var(1), mono_var(2, (n - 1) / 2));
  };

  if (mode.all_sizes()) {
    // e part: p1^n * ae^{n+1}, powers carried incrementally at the
    // truncation each term actually needs.
    if (big_n >= 1) {
      PsPolynomial cur = ps_mul(ps_retruncate(ae, big_n - 1), ae);  // ae^2
      for (int n = 1; n <= big_n; ++n) {
        sum_e = ps_add(sum_e, ps_mul_term(cur, mono_var(1, n), 1, big_n));
        if (n + 1 <= big_n) cur = ps_mul(ps_retruncate(cur, big_n - n - 1), ae);
      }
    }
    // tau part, odd n: p1 p2^{(n-1)/2} * b^{(n+1)/2}.
    if (big_n >= 1) {
      PsPolynomial cur = ps_retruncate(b, big_n - 1);  // b^1
      for (int n = 1; n <= big_n; n += 2) {
        sum_tau = ps_add(sum_tau, ps_mul_term(cur, tau_mono(n), 1, big_n));
        if (n + 2 <= big_n) cur = ps_mul(ps_retruncate(cur, big_n - n - 2), b);
      }
    }
    // tau part, even n: p2^{n/2} * at * b^{n/2}.
    if (big_n >= 2) {
      PsPolynomial cur = ps_mul(ps_retruncate(at, big_n - 2), b);  // at*b^1
      for (int n = 2; n <= big_n; n += 2) {
        sum_tau = ps_add(sum_tau, ps_mul_term(cur, tau_mono(n), 1, big_n));
        if (n + 2 <= big_n) cur = ps_mul(ps_retruncate(cur, big_n - n - 2), b);
      }
    }
  } else {
    int n = mode.k - 2;
    if (n <= big_n) {
      sum_e = ps_mul_term(detail::ps_pow(ae, n + 1, big_n - n), mono_var(1, n), 1, big_n);
      PsPolynomial f = (n % 2 == 1)
                           ? detail::ps_pow(b, (n + 1) / 2, big_n - n)
                           : ps_mul(ps_retruncate(at, big_n - n),
                                    detail::ps_pow(b, n / 2, big_n - n));
      sum_tau = ps_mul_term(f, tau_mono(n), 1, big_n);
    }
  }
  return {{std::move(sum_e), false}, {std::move(sum_tau), false}};
}

// Least fixed point of A -> E(sheet_sum(A)): sets of sheets on the base
// edge.  Every sheet carries at least one fresh vertex, so layer t of
// the image depends only on layers < t of A; iterating from A = 1 with
// the truncation raised stepwise makes iterate t exact through layer t.
inline S2Series solve_anchored(PolygonMode mode, int truncation) {
  S2Series a = s2_const(1, 0);
  for (int t = 1; t <= truncation; ++t)
    a = g_exp_compose(sheet_sum(s2_retruncate(a, t), mode));
  return s2_retruncate(a, truncation);
}

struct RootedSeries {
  S2Series edge;          // root at a labeled edge
  S2Series polygon;       // root at a polygon
  S2Series polygon_edge;  // root at a polygon with a distinguished edge
};

// Root at a polygon: a cycle of k >= 3 vertices whose k edges each carry
// an anchored structure.  For the e part the vertex+structure blocks
// compose into cycles in the ordinary way.  The tau part cannot be a
// composition with the single block X * A: vertices and edges interleave
// around the cycle, so a reflection pairs the two kinds with a half-step
// offset.  For odd k every reflection fixes one vertex and the opposite
// edge; for even k half the reflections fix two vertices and no edge and
// the other half two edges and no vertex.  The tau part is assembled
// from that reflection census, with fixed edges contributing the tau
// part of A and swapped edge pairs the 2-stretch of its e part.
inline S2Series polygon_rooted(const S2Series& a, PolygonMode mode) {
  int big_n = a.truncation();
  CycleIndexSeries outer = mode.all_sizes() ? g_c_ge(3, big_n).part_e
                                            : g_c(mode.k, big_n).part_e;
  CycleIndexSeries part_e =
      plethysm(outer, cis_from_poly(ps_mul(ps_var(1, big_n), a.part_e.poly, big_n)));

  const PsPolynomial& at = a.part_tau.poly;
  PsPolynomial b = ps_retruncate(ps_stretch(a.part_e.poly, 2), big_n);
  PsPolynomial at2 = ps_mul(at, at, big_n);
  std::vector<PsPolynomial> bpow{ps_const(1, big_n)};
  while (static_cast<int>(bpow.size()) <= big_n / 2)
    bpow.push_back(ps_mul(bpow.back(), b, big_n));

  PsPolynomial tau = ps_zero(big_n);
  auto add_size = [&](int k) {
    if (k > big_n) return;
    int room = big_n - k;
    if (k % 2 == 1) {
      int h = (k - 1) / 2;
      PsPolynomial f = ps_mul(ps_retruncate(at, room), ps_retruncate(bpow[h], room), room);
      tau = ps_add(tau, ps_mul_term(f, mono_mul(mono_var(1), mono_var(2, h)), 1, big_n));
    } else {
      int h = k / 2;
      tau = ps_add(tau, ps_mul_term(ps_retruncate(bpow[h], room),
                                    mono_mul(mono_var(1, 2), mono_var(2, h - 1)),
                                    rational(1, 2), big_n));
      PsPolynomial f = ps_mul(ps_retruncate(at2, room), ps_retruncate(bpow[h - 1], room), room);
      tau = ps_add(tau, ps_mul_term(f, mono_var(2, h), rational(1, 2), big_n));
    }
  };
  if (mode.all_sizes())
    for (int k = 3; k <= big_n; ++k) add_size(k);
  else
    add_size(mode.k);
  return {std::move(part_e), {std::move(tau), false}};
}

// The three rooted unfoldings of the anchored fixed point.
inline RootedSeries rooted_series(const S2Series& a, PolygonMode mode) {
  int n = a.truncation();
  S2Series edge = g_mul(g_l(2, n), g_sub(a, s2_const(1, n)));
  S2Series polygon = polygon_rooted(a, mode);
  S2Series polygon_edge = g_mul(g_l(2, n), g_mul(a, sheet_sum(a, mode)));
  for (int i = 0; i <= n; ++i) {
    labeled_count(edge.part_e, i);
    labeled_count(polygon.part_e, i);
    labeled_count(polygon_edge.part_e, i);
  }
  return {std::move(edge), std::move(polygon), std::move(polygon_edge)};
}

// Edge-rooted + polygon-rooted - both-rooted = unrooted.  The
// subtraction must cancel down to a genuine species; a negative labeled
// count means an upstream computation went wrong.
inline S2Series dissymmetry(const RootedSeries& r) {
  S2Series out = g_sub(g_add(r.edge, r.polygon), r.polygon_edge);
  for (int i = 0; i <= out.truncation(); ++i) labeled_count(out.part_e, i);
  return out;
}

struct PolygonalSolution {
  S2Series anchored;
  RootedSeries rooted;
  S2Series oriented;             // unrooted, orientation retained
  CycleIndexSeries unoriented;   // orientation forgotten
  CountsTable counts;
};

inline PolygonalSolution solve_mode(PolygonMode mode, int truncation) {
  PolygonalSolution s;
  s.anchored = solve_anchored(mode, truncation);
  s.rooted = rooted_series(s.anchored, mode);
  s.oriented = dissymmetry(s.rooted);
  s.unoriented = quotient_s2(s.oriented);
  s.counts = counts_from_series(s.unoriented, truncation);
  return s;
}

inline PolygonalSolution solve_polygonal(int truncation) {
  return solve_mode(any_polygon(), truncation);
}

inline PolygonalSolution solve_kgonal(int k, int truncation) {
  return solve_mode(only_kgon(k), truncation);
}

inline CountsTable polygonal_counts(int truncation) {
  return solve_polygonal(truncation).counts;
}

inline CountsTable kgonal_counts(int k, int truncation) {
  return solve_kgonal(k, truncation).counts;
}

}  // namespace specount
