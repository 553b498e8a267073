#pragma once

// Graph-level ground truth for the series pipeline, small n only.  The
// actual labeled graphs are generated edge set by edge set, deduplicated
// by canonical form, and counts and cycle indices are read directly off
// the structures and their symmetries.  Everything here favors being
// obviously correct over being fast.

#include "specount/cycle_index.hpp"
#include "specount/power_sum.hpp"
#include "specount/rational.hpp"
#include "specount/s2_series.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

namespace specount {

// Vertex pairs of a graph on n <= 10 vertices fit a 64-bit edge mask
// with room left to pack the used-vertex set alongside.
constexpr int max_oracle_vertices = 10;

inline int pair_slot(int n, int u, int v) {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

inline bool has_edge(int n, std::uint64_t edges, int u, int v) {
  return edges >> pair_slot(n, u, v) & 1;
}

inline std::uint64_t with_edge(int n, std::uint64_t edges, int u, int v) {
  return edges | std::uint64_t(1) << pair_slot(n, u, v);
}

inline std::uint64_t apply_perm(int n, std::uint64_t edges, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (has_edge(n, edges, u, v)) out = with_edge(n, out, perm[u], perm[v]);
  return out;
}

inline std::vector<int> degrees(int n, std::uint64_t edges) {
  std::vector<int> d(n, 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (has_edge(n, edges, u, v)) ++d[u], ++d[v];
  return d;
}

// ---------------------------------------------------------------------
// Canonical form: iterated neighborhood-color refinement, then
// individualize vertices of the first non-singleton cell and take the
// minimum edge encoding over all discrete colorings reached.

namespace detail {

inline void refine_colors(int n, std::uint64_t edges, std::vector<int>& color) {
  std::vector<std::vector<int>> sig(n);
  for (bool changed = true; changed;) {
    for (int v = 0; v < n; ++v) {
      sig[v].clear();
      sig[v].push_back(color[v]);
      for (int u = 0; u < n; ++u)
        if (u != v && has_edge(n, edges, u, v)) sig[v].push_back(color[u]);
      std::sort(sig[v].begin() + 1, sig[v].end());
    }
    std::vector<const std::vector<int>*> order(n);
    for (int v = 0; v < n; ++v) order[v] = &sig[v];
    std::vector<const std::vector<int>*> sorted = order;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto* a, const auto* b) { return *a < *b; });
    changed = false;
    for (int v = 0; v < n; ++v) {
      int c = static_cast<int>(
          std::lower_bound(sorted.begin(), sorted.end(), order[v],
                           [](const auto* a, const auto* b) { return *a < *b; }) -
          sorted.begin());
      if (c != color[v]) changed = true;
      color[v] = c;
    }
  }
}

inline std::uint64_t encode_by_color(int n, std::uint64_t edges, const std::vector<int>& color) {
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  std::sort(pos.begin(), pos.end(), [&](int a, int b) { return color[a] < color[b]; });
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[pos[i]] = i;
  return apply_perm(n, edges, perm);
}

inline void canon_search(int n, std::uint64_t edges, std::vector<int> color,
                         std::uint64_t& best, bool& have) {
  refine_colors(n, edges, color);
  int cell = -1;
  for (int c = 0; c < n && cell < 0; ++c) {
    int count = 0;
    for (int v = 0; v < n; ++v) count += color[v] == c;
    if (count > 1) cell = c;
  }
  if (cell < 0) {
    std::uint64_t enc = encode_by_color(n, edges, color);
    if (!have || enc < best) best = enc, have = true;
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (color[v] != cell) continue;
    std::vector<int> next = color;
    next[v] = n;  // fresh color; refinement renumbers
    canon_search(n, edges, std::move(next), best, have);
  }
}

}  // namespace detail

inline std::uint64_t canonical_form(int n, std::uint64_t edges) {
  std::uint64_t best = 0;
  bool have = false;
  detail::canon_search(n, edges, std::vector<int>(n, 0), best, have);
  return best;
}

inline std::size_t count_orbits(int n, const std::vector<std::uint64_t>& graphs) {
  std::unordered_set<std::uint64_t> forms;
  for (std::uint64_t g : graphs) forms.insert(canonical_form(n, g));
  return forms.size();
}

inline std::vector<std::uint64_t> orbit_representatives(int n,
                                                        const std::vector<std::uint64_t>& graphs) {
  std::unordered_set<std::uint64_t> forms;
  for (std::uint64_t g : graphs) forms.insert(canonical_form(n, g));
  return {forms.begin(), forms.end()};
}

// ---------------------------------------------------------------------
// Generation.  States are (edge mask, used-vertex set) pairs; a new
// polygon always consumes at least one fresh vertex, so breadth-first
// closure with global deduplication terminates.

namespace detail {

inline std::uint64_t pack_state(int n, std::uint64_t edges, unsigned used) {
  return edges << n | used;
}

// All cycle graphs on the given vertices, one edge mask per distinct
// undirected cycle: first vertex pinned, reflection halved.
inline void cycles_on(int n, const std::vector<int>& verts, std::vector<std::uint64_t>& out) {
  int k = static_cast<int>(verts.size());
  std::vector<int> rest(verts.begin() + 1, verts.end());
  std::sort(rest.begin(), rest.end());
  do {
    if (k > 2 && rest.front() > rest.back()) continue;
    std::uint64_t m = 0;
    int prev = verts[0];
    for (int x : rest) m = with_edge(n, m, prev, x), prev = x;
    out.push_back(with_edge(n, m, prev, verts[0]));
  } while (std::next_permutation(rest.begin(), rest.end()));
}

}  // namespace detail

// Labeled polygonal 2-trees covering all n vertices; size_k = 0 allows
// polygons of every size, otherwise only k-gons.
inline std::vector<std::uint64_t> generate_polygonal(int n, int size_k = 0) {
  if (n < 0 || n > max_oracle_vertices) throw std::invalid_argument("generate_polygonal: n out of range");
  if (size_k != 0 && size_k < 3) throw std::invalid_argument("generate_polygonal: polygon size");
  std::vector<std::uint64_t> full;
  if (n < 3) return full;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<std::uint64_t, unsigned>> queue;

  auto push = [&](std::uint64_t edges, unsigned used) {
    if (seen.insert(detail::pack_state(n, edges, used)).second) {
      queue.emplace_back(edges, used);
      if (used == (1u << n) - 1) full.push_back(edges);
    }
  };

  // seeds: one polygon
  std::vector<int> verts;
  for (unsigned sub = 0; sub < 1u << n; ++sub) {
    int k = std::popcount(sub);
    if (k < 3 || (size_k != 0 && k != size_k)) continue;
    verts.clear();
    for (int v = 0; v < n; ++v)
      if (sub >> v & 1) verts.push_back(v);
    std::vector<std::uint64_t> cycles;
    detail::cycles_on(n, verts, cycles);
    for (std::uint64_t c : cycles) push(c, sub);
  }

  // closure: glue a polygon onto an existing edge through fresh vertices
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [edges, used] = queue[head];
    std::vector<int> fresh;
    for (int v = 0; v < n; ++v)
      if (!(used >> v & 1)) fresh.push_back(v);
    if (fresh.empty()) continue;
    for (int u = 0; u < n; ++u) {
      if (!(used >> u & 1)) continue;
      for (int v = u + 1; v < n; ++v) {
        if (!(used >> v & 1) || !has_edge(n, edges, u, v)) continue;
        // ordered sequences of fresh vertices form the new polygon's path
        std::vector<int> seq;
        auto grow = [&](auto&& self, unsigned taken) -> void {
          int m = static_cast<int>(seq.size());
          if (m >= 1 && (size_k == 0 || m == size_k - 2)) {
            std::uint64_t g = edges;
            int prev = u;
            for (int x : seq) g = with_edge(n, g, prev, x), prev = x;
            push(with_edge(n, g, prev, v), used | taken);
          }
          if (size_k != 0 && m >= size_k - 2) return;
          for (int x : fresh) {
            if (taken >> x & 1) continue;
            seq.push_back(x);
            self(self, taken | 1u << x);
            seq.pop_back();
          }
        };
        grow(grow, 0);
      }
    }
  }
  std::sort(full.begin(), full.end());
  return full;
}

// Labeled succulents covering all n vertices: connected graphs all of
// whose blocks are polygonal 2-trees, glued at shared cut vertices.
inline std::vector<std::uint64_t> generate_succulents(int n, int size_k = 0) {
  if (n < 0 || n > max_oracle_vertices) throw std::invalid_argument("generate_succulents: n out of range");
  std::vector<std::uint64_t> full;
  if (n == 0) return full;
  if (n == 1) return {0};

  // labeled polygonal 2-trees on {0..s-1}, by size
  std::vector<std::vector<std::uint64_t>> blocks(n + 1);
  for (int s = 3; s <= n; ++s) blocks[s] = generate_polygonal(s, size_k);

  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<std::uint64_t, unsigned>> queue;
  auto push = [&](std::uint64_t edges, unsigned used) {
    if (seen.insert(detail::pack_state(n, edges, used)).second) {
      queue.emplace_back(edges, used);
      if (used == (1u << n) - 1) full.push_back(edges);
    }
  };
  for (int v = 0; v < n; ++v) push(0, 1u << v);

  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [edges, used] = queue[head];
    std::vector<int> fresh;
    for (int v = 0; v < n; ++v)
      if (!(used >> v & 1)) fresh.push_back(v);
    int f = static_cast<int>(fresh.size());
    if (f < 2) continue;
    for (int a = 0; a < n; ++a) {
      if (!(used >> a & 1)) continue;
      // choose the block's other vertices among the fresh ones
      for (unsigned pick = 0; pick < 1u << f; ++pick) {
        int j = std::popcount(pick);
        if (j < 2 || j + 1 > n || blocks[j + 1].empty()) continue;
        std::vector<int> target{a};
        unsigned taken = 0;
        for (int i = 0; i < f; ++i)
          if (pick >> i & 1) target.push_back(fresh[i]), taken |= 1u << fresh[i];
        std::sort(target.begin(), target.end());
        for (std::uint64_t b : blocks[j + 1]) {
          std::uint64_t g = edges;
          for (int u = 0; u <= j; ++u)
            for (int v = u + 1; v <= j; ++v)
              if (has_edge(j + 1, b, u, v)) g = with_edge(n, g, target[u], target[v]);
          push(g, used | taken);
        }
      }
    }
  }
  std::sort(full.begin(), full.end());
  return full;
}

// ---------------------------------------------------------------------
// Polygon structure and coherent orientations.

// All chordless cycles, each listed once as a vertex sequence.  In a
// polygonal 2-tree these are exactly the polygons.
inline std::vector<std::vector<int>> chordless_cycles(int n, std::uint64_t edges) {
  std::vector<std::vector<int>> out;
  std::unordered_set<std::uint64_t> keys;
  std::vector<int> path;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!has_edge(n, edges, u, v)) continue;
      path = {u, v};
      auto dfs = [&](auto&& self) -> void {
        int last = path.back();
        for (int w = 0; w < n; ++w) {
          if (w == u || !has_edge(n, edges, last, w)) continue;
          if (std::find(path.begin(), path.end(), w) != path.end()) continue;
          bool chord = false;
          for (std::size_t i = 1; i + 1 < path.size(); ++i)
            if (has_edge(n, edges, path[i], w)) { chord = true; break; }
          if (chord) continue;
          if (has_edge(n, edges, w, u)) {
            if (path.size() >= 2) {
              path.push_back(w);
              std::uint64_t key = 0;
              for (int x : path) key |= std::uint64_t(1) << x;
              if (keys.insert(key).second) out.push_back(path);
              path.pop_back();
            }
            continue;
          }
          path.push_back(w);
          self(self);
          path.pop_back();
        }
      };
      dfs(dfs);
    }
  }
  return out;
}

// One of the two coherent orientations: every polygon a directed cycle,
// shared edges traversed in the same direction by both polygons.
// Returns an n*n adjacency of directed edges.
inline std::vector<char> coherent_orientation(int n, std::uint64_t edges) {
  std::vector<std::vector<int>> polys = chordless_cycles(n, edges);
  std::vector<char> dir(n * n, 0);
  if (polys.empty()) return dir;
  std::vector<char> done(polys.size(), 0);
  auto orient = [&](const std::vector<int>& p, bool forward) {
    int k = static_cast<int>(p.size());
    for (int i = 0; i < k; ++i) {
      int a = p[i], b = p[(i + 1) % k];
      if (forward) dir[a * n + b] = 1;
      else dir[b * n + a] = 1;
    }
  };
  orient(polys[0], true);
  done[0] = 1;
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      if (done[i]) continue;
      const std::vector<int>& p = polys[i];
      int k = static_cast<int>(p.size());
      for (int j = 0; j < k; ++j) {
        int a = p[j], b = p[(j + 1) % k];
        if (dir[a * n + b]) { orient(p, true);  done[i] = 1; progress = true; break; }
        if (dir[b * n + a]) { orient(p, false); done[i] = 1; progress = true; break; }
      }
    }
  }
  for (char d : done)
    if (!d) throw integrity_error("coherent_orientation: polygon components disconnected");
  return dir;
}

// ---------------------------------------------------------------------
// Cycle indices from orbit representatives and their symmetries.

namespace detail {

inline PowerSumMonomial perm_cycle_type(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::vector<int> lens;
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    int len = 0;
    for (int w = v; !seen[w]; w = perm[w]) seen[w] = true, ++len;
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end());
  PowerSumMonomial m;
  for (int l : lens) m = mono_mul(m, mono_var(l));
  return m;
}

}  // namespace detail

struct OrientedIndex {
  S2Series oriented;             // coherently-oriented structures, both parts
  CycleIndexSeries unoriented;   // plain cycle index of the underlying graphs
};

// Layer-n cycle indices of the polygonal-2-tree species, assembled from
// every orbit's automorphisms.  Each graph carries exactly two coherent
// orientations; an automorphism either preserves both or swaps them,
// and one directed edge decides which.
inline OrientedIndex oracle_polygonal_index(int n, int size_k, int truncation) {
  std::vector<std::uint64_t> reps = orbit_representatives(n, generate_polygonal(n, size_k));
  PsPolynomial part_e = ps_zero(truncation);
  PsPolynomial part_tau = ps_zero(truncation);
  PsPolynomial plain = ps_zero(truncation);
  std::vector<int> perm(n);
  for (std::uint64_t g : reps) {
    std::vector<char> dir = coherent_orientation(n, g);
    int eu = -1, ev = -1;
    for (int u = 0; u < n && eu < 0; ++u)
      for (int v = 0; v < n; ++v)
        if (dir[u * n + v]) { eu = u; ev = v; break; }
    std::vector<PowerSumMonomial> preserving, reversing;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (apply_perm(n, g, perm) != g) continue;
      if (dir[perm[eu] * n + perm[ev]]) preserving.push_back(detail::perm_cycle_type(perm));
      else reversing.push_back(detail::perm_cycle_type(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rational aut(static_cast<long>(preserving.size() + reversing.size()));
    for (const PowerSumMonomial& m : preserving) {
      part_e = ps_add(part_e, ps_term(m, 2 / aut, truncation));
      plain = ps_add(plain, ps_term(m, 1 / aut, truncation));
    }
    for (const PowerSumMonomial& m : reversing) {
      part_tau = ps_add(part_tau, ps_term(m, 2 / aut, truncation));
      plain = ps_add(plain, ps_term(m, 1 / aut, truncation));
    }
  }
  return {{{std::move(part_e), false}, {std::move(part_tau), false}},
          {std::move(plain), false}};
}

// Plain cycle index layer for the succulent species.
inline CycleIndexSeries oracle_succulent_index(int n, int truncation) {
  std::vector<std::uint64_t> reps = orbit_representatives(n, generate_succulents(n));
  PsPolynomial plain = ps_zero(truncation);
  std::vector<int> perm(n);
  for (std::uint64_t g : reps) {
    std::vector<PowerSumMonomial> autos;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (apply_perm(n, g, perm) == g) autos.push_back(detail::perm_cycle_type(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    Rational aut(static_cast<long>(autos.size()));
    for (const PowerSumMonomial& m : autos)
      plain = ps_add(plain, ps_term(m, 1 / aut, truncation));
  }
  return {std::move(plain), false};
}

// ---------------------------------------------------------------------
// Exhaustive fixed-point layers for the order built-ins.  Structures
// are enumerated one by one for a representative of each cycle type;
// fixed-structure counts are class functions, so one representative
// suffices.

namespace detail {

template <typename Visit>
void for_each_cycle_type(int n, Visit visit) {
  // partitions of n with a representative permutation and the class size
  std::vector<int> parts;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      std::vector<int> perm;
      for (int len : parts) {
        int base = static_cast<int>(perm.size());
        for (int i = 0; i < len; ++i) perm.push_back(base + (i + 1) % len);
      }
      // class size n! / z, z = prod over lengths i: i^m_i * m_i!
      Rational z = 1;
      int run = 1;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        z *= parts[i];
        if (i + 1 < parts.size() && parts[i + 1] == parts[i]) ++run;
        else z *= factorial(run), run = 1;
      }
      visit(perm, z);
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      parts.push_back(p);
      self(self, remaining - p, p);
      parts.pop_back();
    }
  };
  rec(rec, n, n);
}

}  // namespace detail

// Layer n of the linear-order built-in: count orders w with
// sigma(w(i)) = w(i) (plain) or sigma(w(n-1-i)) = w(i) (reversed).
inline PsPolynomial oracle_linear_layer(int n, bool reversed, int truncation) {
  PsPolynomial out = ps_zero(truncation);
  if (n == 0) return ps_const(1, truncation);
  detail::for_each_cycle_type(n, [&](const std::vector<int>& sigma, const Rational& z) {
    long fixed = 0;
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 0);
    do {
      bool ok = true;
      for (int i = 0; i < n && ok; ++i)
        ok = sigma[w[reversed ? n - 1 - i : i]] == w[i];
      fixed += ok;
    } while (std::next_permutation(w.begin(), w.end()));
    if (fixed)
      out = ps_add(out, ps_term(detail::perm_cycle_type(sigma), Rational(fixed) / z, truncation));
  });
  return out;
}

// Layer n of the cyclic-order built-in, orders as successor maps c:
// plain wants sigma c sigma^-1 = c, reversed wants sigma c sigma^-1 = c^-1.
inline PsPolynomial oracle_cyclic_layer(int n, bool reversed, int truncation) {
  PsPolynomial out = ps_zero(truncation);
  if (n == 0) return ps_zero(truncation);
  if (n == 1) return ps_term(mono_var(1), 1, truncation);
  detail::for_each_cycle_type(n, [&](const std::vector<int>& sigma, const Rational& z) {
    long fixed = 0;
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<int> c(n);
    do {
      int prev = 0;
      for (int x : rest) c[prev] = x, prev = x;
      c[prev] = 0;
      bool ok = true;
      for (int v = 0; v < n && ok; ++v)
        ok = reversed ? c[sigma[c[v]]] == sigma[v] : sigma[c[v]] == c[sigma[v]];
      fixed += ok;
    } while (std::next_permutation(rest.begin(), rest.end()));
    if (fixed)
      out = ps_add(out, ps_term(detail::perm_cycle_type(sigma), Rational(fixed) / z, truncation));
  });
  return out;
}

}  // namespace specount
