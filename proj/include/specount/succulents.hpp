#pragma once

// Succulents: connected graphs all of whose blocks are polygonal
// 2-trees, so the blocks hang off shared cut vertices.  With B the
// block series, the vertex-pointed series is the least fixed point of
//
//   S* = X * E(B'(S*))
//
// (the root vertex carries a set of derived blocks, each of whose other
// vertices sprouts a pointed succulent), and the unpointed series
// follows from a dissymmetry cancellation between vertex-pointed and
// block-pointed structures:
//
//   S = S* + B(S*) - S* * B'(S*).

#include "specount/counts.hpp"
#include "specount/cycle_index.hpp"
#include "specount/polygonal.hpp"
#include "specount/power_sum.hpp"
#include "specount/rational.hpp"

#include <stdexcept>
#include <utility>

namespace specount {

// Least fixed point of S -> X * E(B'(S)) from S = 0, one pass per
// truncation level.  Layer t of the right-hand side reads only layers
// < t of S (the X factor shifts by one), so pass t lands layer t
// exactly.  Needs the block series one layer beyond the target so its
// derivative still covers truncation - 1.
inline CycleIndexSeries solve_pointed(const CycleIndexSeries& blocks, int truncation) {
  if (blocks.valuation() < 3)
    throw std::invalid_argument("solve_pointed: block series must start at weight 3");
  CycleIndexSeries dblocks = derivative(blocks);
  if (dblocks.truncation() < truncation - 1)
    throw std::invalid_argument("solve_pointed: block series truncated too early");
  CycleIndexSeries s = cis_zero(0);
  for (int t = 1; t <= truncation; ++t) {
    CycleIndexSeries grown = exp_compose(plethysm(cis_retruncate(dblocks, t - 1), s));
    s = cis_from_poly(ps_mul_term(grown.poly, mono_var(1), 1, t));
  }
  return s;
}

// S = S* + B(S*) - S* * B'(S*), at the truncation of the pointed series.
inline CycleIndexSeries assemble_unpointed(const CycleIndexSeries& blocks,
                                           const CycleIndexSeries& pointed) {
  CycleIndexSeries dblocks = derivative(blocks);
  CycleIndexSeries whole = plethysm(blocks, pointed);
  CycleIndexSeries derived = plethysm(dblocks, pointed);
  CycleIndexSeries s =
      cis_sub(cis_add(pointed, whole), cis_mul(pointed, derived));
  for (int i = 0; i <= s.truncation(); ++i) labeled_count(s, i);
  return s;
}

struct SucculentSolution {
  PolygonalSolution polygons;  // solved one layer deep for the derivative
  CycleIndexSeries pointed;
  CycleIndexSeries series;
  CountsTable counts;
};

inline SucculentSolution solve_succulents(int truncation) {
  SucculentSolution s;
  s.polygons = solve_polygonal(truncation + 1);
  s.pointed = solve_pointed(s.polygons.unoriented, truncation);
  s.series = assemble_unpointed(s.polygons.unoriented, s.pointed);
  s.counts = counts_from_series(s.series, truncation);
  return s;
}

inline CountsTable succulent_counts(int max_n) {
  return solve_succulents(max_n).counts;
}

}  // namespace specount
