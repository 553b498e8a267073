#pragma once
// A small declarative language for systems of species equations.  Text
// like
//
//   Astar = E(sum(n>=1, L[n](X) * L[n+1](Astar)));
//
// parses to a system of named bindings, is checked for well-formedness
// and guarded recursion, and solves by layerwise fixed-point iteration
// in either ordinary cycle-index or reversal-equivariant semantics.

#include "specount/cycle_index.hpp"
#include "specount/power_sum.hpp"
#include "specount/rational.hpp"
#include "specount/s2_series.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specount {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + what),
        line(line),
        column(column) {}
};

// ---------------------------------------------------------------------
// Syntax tree

enum class IndexKind { number, variable, offset, at_least };

struct IndexExpr {
  IndexKind kind = IndexKind::number;
  long value = 0;   // number / at_least bound / offset addend
  std::string var;  // variable / offset base
};

enum class NodeKind {
  number,
  atom,         // X
  name,
  add,
  sub,
  mul,
  set_of,       // E(g)
  lin,          // L[idx](g)
  cyc,          // C[idx](g)
  polygon,      // P[idx](v, a): cycle of v-slots alternating with a-slots
  deriv,        // D(g)
  quot,         // quot2(g)
  bounded_sum,  // sum(var >= lo, body)
  call,         // F(g) for a bound name F
};

struct SpeciesExpr {
  NodeKind kind = NodeKind::number;
  long number = 0;
  std::string name;               // name / call target / sum variable
  IndexExpr index;                // lin / cyc / polygon
  long lower = 0;                 // bounded_sum
  std::vector<SpeciesExpr> kids;  // operands in order
  int line = 0, column = 0;
};

struct Binding {
  std::string name;
  SpeciesExpr expr;
  int line = 0, column = 0;
};

struct SpeciesSystem {
  std::vector<Binding> bindings;

  int find(const std::string& name) const {
    for (std::size_t i = 0; i < bindings.size(); ++i)
      if (bindings[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

// ---------------------------------------------------------------------
// Lexing

namespace detail {

struct Token {
  enum Type { ident, number, punct, end } type = end;
  std::string text;
  long value = 0;
  int line = 1, column = 1;
};

inline std::vector<Token> lex_species(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (; k > 0; --k, ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.type = Token::number;
      t.text = text.substr(i, j - i);
      if (t.text.size() > 9) throw ParseError("number literal too large", line, col);
      t.value = std::stol(t.text);
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      t.type = Token::ident;
      t.text = text.substr(i, j - i);
      advance(j - i);
    } else if (c == '>' && i + 1 < text.size() && text[i + 1] == '=') {
      t.type = Token::punct;
      t.text = ">=";
      advance(2);
    } else if (std::string("()[],;=+-*").find(c) != std::string::npos) {
      t.type = Token::punct;
      t.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    out.push_back(std::move(t));
  }
  Token fin;
  fin.type = Token::end;
  fin.line = line;
  fin.column = col;
  out.push_back(fin);
  return out;
}

inline bool reserved_word(const std::string& s) {
  return s == "X" || s == "E" || s == "L" || s == "C" || s == "P" ||
         s == "D" || s == "quot2" || s == "sum";
}

struct Parser {
  std::vector<Token> toks;
  std::size_t pos = 0;

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, peek().line, peek().column);
  }

  bool at_punct(const std::string& p) const {
    return peek().type == Token::punct && peek().text == p;
  }

  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    ++pos;
  }

  std::string expect_ident() {
    if (peek().type != Token::ident) fail("expected identifier");
    return take().text;
  }

  long expect_number() {
    if (peek().type != Token::number) fail("expected number");
    return take().value;
  }

  IndexExpr parse_index() {
    IndexExpr ix;
    if (at_punct(">=")) {
      ++pos;
      ix.kind = IndexKind::at_least;
      ix.value = expect_number();
    } else if (peek().type == Token::number) {
      ix.kind = IndexKind::number;
      ix.value = take().value;
    } else {
      ix.var = expect_ident();
      if (at_punct("+")) {
        ++pos;
        ix.kind = IndexKind::offset;
        ix.value = expect_number();
      } else {
        ix.kind = IndexKind::variable;
      }
    }
    return ix;
  }

  SpeciesExpr node(NodeKind kind, const Token& at) {
    SpeciesExpr e;
    e.kind = kind;
    e.line = at.line;
    e.column = at.column;
    return e;
  }

  SpeciesExpr parse_factor() {
    Token t = peek();
    if (t.type == Token::number) {
      ++pos;
      SpeciesExpr e = node(NodeKind::number, t);
      e.number = t.value;
      return e;
    }
    if (at_punct("(")) {
      ++pos;
      SpeciesExpr e = parse_expr();
      expect_punct(")");
      return e;
    }
    if (t.type != Token::ident) fail("expected a factor");
    ++pos;
    if (t.text == "X") return node(NodeKind::atom, t);
    if (t.text == "E" || t.text == "D" || t.text == "quot2") {
      SpeciesExpr e = node(t.text == "E"   ? NodeKind::set_of
                           : t.text == "D" ? NodeKind::deriv
                                           : NodeKind::quot,
                           t);
      expect_punct("(");
      e.kids.push_back(parse_expr());
      expect_punct(")");
      return e;
    }
    if (t.text == "L" || t.text == "C" || t.text == "P") {
      SpeciesExpr e = node(t.text == "L"   ? NodeKind::lin
                           : t.text == "C" ? NodeKind::cyc
                                           : NodeKind::polygon,
                           t);
      expect_punct("[");
      e.index = parse_index();
      expect_punct("]");
      expect_punct("(");
      e.kids.push_back(parse_expr());
      if (e.kind == NodeKind::polygon) {
        expect_punct(",");
        e.kids.push_back(parse_expr());
      }
      expect_punct(")");
      return e;
    }
    if (t.text == "sum") {
      SpeciesExpr e = node(NodeKind::bounded_sum, t);
      expect_punct("(");
      e.name = expect_ident();
      expect_punct(">=");
      e.lower = expect_number();
      expect_punct(",");
      e.kids.push_back(parse_expr());
      expect_punct(")");
      return e;
    }
    // A named series, optionally applied to an argument.
    if (at_punct("(")) {
      SpeciesExpr e = node(NodeKind::call, t);
      e.name = t.text;
      ++pos;
      e.kids.push_back(parse_expr());
      expect_punct(")");
      return e;
    }
    SpeciesExpr e = node(NodeKind::name, t);
    e.name = t.text;
    return e;
  }

  SpeciesExpr parse_term() {
    SpeciesExpr e = parse_factor();
    while (at_punct("*")) {
      Token t = take();
      SpeciesExpr m = node(NodeKind::mul, t);
      m.kids.push_back(std::move(e));
      m.kids.push_back(parse_factor());
      e = std::move(m);
    }
    return e;
  }

  SpeciesExpr parse_expr() {
    SpeciesExpr e = parse_term();
    while (at_punct("+") || at_punct("-")) {
      Token t = take();
      SpeciesExpr s = node(t.text == "+" ? NodeKind::add : NodeKind::sub, t);
      s.kids.push_back(std::move(e));
      s.kids.push_back(parse_term());
      e = std::move(s);
    }
    return e;
  }

  SpeciesSystem parse_system() {
    SpeciesSystem sys;
    while (peek().type != Token::end) {
      Binding b;
      Token t = peek();
      b.name = expect_ident();
      b.line = t.line;
      b.column = t.column;
      if (reserved_word(b.name))
        throw ParseError("'" + b.name + "' is reserved", t.line, t.column);
      expect_punct("=");
      b.expr = parse_expr();
      if (at_punct(";")) ++pos;  // terminator optional: bindings self-delimit
      if (sys.find(b.name) >= 0)
        throw ParseError("duplicate binding '" + b.name + "'", t.line, t.column);
      sys.bindings.push_back(std::move(b));
    }
    return sys;
  }
};

}  // namespace detail

inline SpeciesSystem parse_species(const std::string& text) {
  detail::Parser p{detail::lex_species(text)};
  return p.parse_system();
}

// ---------------------------------------------------------------------
// Static structure: name resolution, dependencies, guarded recursion.

namespace detail {

inline void walk_names(const SpeciesExpr& e,
                       const std::function<void(const SpeciesExpr&)>& visit) {
  if (e.kind == NodeKind::name || e.kind == NodeKind::call) visit(e);
  for (const SpeciesExpr& k : e.kids) walk_names(k, visit);
}

// Strongly connected components of the binding dependency graph, in
// topological order (suppliers first).
inline std::vector<std::vector<int>> binding_sccs(const SpeciesSystem& sys) {
  int n = static_cast<int>(sys.bindings.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    walk_names(sys.bindings[i].expr, [&](const SpeciesExpr& e) {
      int j = sys.find(e.name);
      if (j >= 0) adj[i].push_back(j);
    });
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on(n, false);
  std::vector<std::vector<int>> sccs;
  int counter = 0;
  auto strongconnect = [&](auto&& self, int v) -> void {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      for (;;) {
        int w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp.push_back(w);
        if (w == v) break;
      }
      std::sort(comp.begin(), comp.end());
      sccs.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) strongconnect(strongconnect, v);
  // A component pops only after everything it depends on has popped,
  // so the emission order already has suppliers first.
  return sccs;
}

using IndexEnv = std::map<std::string, long>;

inline long index_lower(const IndexExpr& ix, const IndexEnv& env, int line, int col) {
  switch (ix.kind) {
    case IndexKind::number:
    case IndexKind::at_least:
      return ix.value;
    case IndexKind::variable:
    case IndexKind::offset: {
      auto it = env.find(ix.var);
      if (it == env.end())
        throw ParseError("unbound index variable '" + ix.var + "'", line, col);
      return it->second + (ix.kind == IndexKind::offset ? ix.value : 0);
    }
  }
  return 0;
}

// Conservative lower bound on the valuation (smallest populated layer).
// Named series count as 0: nothing is assumed about other bindings.
inline long valuation_bound(const SpeciesExpr& e, const IndexEnv& env) {
  switch (e.kind) {
    case NodeKind::number:
    case NodeKind::name:
    case NodeKind::set_of:
    case NodeKind::call:
      return 0;
    case NodeKind::atom:
      return 1;
    case NodeKind::add:
    case NodeKind::sub:
      return std::min(valuation_bound(e.kids[0], env), valuation_bound(e.kids[1], env));
    case NodeKind::mul:
      return valuation_bound(e.kids[0], env) + valuation_bound(e.kids[1], env);
    case NodeKind::lin:
    case NodeKind::cyc:
      return index_lower(e.index, env, e.line, e.column) *
             valuation_bound(e.kids[0], env);
    case NodeKind::polygon:
      return index_lower(e.index, env, e.line, e.column) *
             (valuation_bound(e.kids[0], env) + valuation_bound(e.kids[1], env));
    case NodeKind::deriv:
      return std::max(valuation_bound(e.kids[0], env) - 1, 0L);
    case NodeKind::quot:
      return valuation_bound(e.kids[0], env);
    case NodeKind::bounded_sum: {
      IndexEnv inner = env;
      inner[e.name] = e.lower;
      return valuation_bound(e.kids[0], inner);
    }
  }
  return 0;
}

constexpr long unguarded = 1L << 40;

// Smallest valuation shift the surrounding context adds to any
// occurrence of one of `targets`.  Layer t of the whole expression then
// depends only on target layers <= t - shift, which is what makes
// layerwise fixed-point iteration converge.
inline long recursion_shift(const SpeciesExpr& e,
                            const std::vector<std::string>& targets,
                            const IndexEnv& env) {
  auto is_target = [&](const std::string& s) {
    return std::find(targets.begin(), targets.end(), s) != targets.end();
  };
  switch (e.kind) {
    case NodeKind::number:
    case NodeKind::atom:
      return unguarded;
    case NodeKind::name:
      return is_target(e.name) ? 0 : unguarded;
    case NodeKind::add:
    case NodeKind::sub:
      return std::min(recursion_shift(e.kids[0], targets, env),
                      recursion_shift(e.kids[1], targets, env));
    case NodeKind::mul:
      return std::min(
          recursion_shift(e.kids[0], targets, env) + valuation_bound(e.kids[1], env),
          recursion_shift(e.kids[1], targets, env) + valuation_bound(e.kids[0], env));
    case NodeKind::set_of:
    case NodeKind::quot:
      return recursion_shift(e.kids[0], targets, env);
    case NodeKind::lin:
    case NodeKind::cyc: {
      long k = index_lower(e.index, env, e.line, e.column);
      return recursion_shift(e.kids[0], targets, env) +
             (k - 1) * valuation_bound(e.kids[0], env);
    }
    case NodeKind::polygon: {
      long k = index_lower(e.index, env, e.line, e.column);
      long v0 = valuation_bound(e.kids[0], env);
      long v1 = valuation_bound(e.kids[1], env);
      return std::min(
          recursion_shift(e.kids[0], targets, env) + (k - 1) * v0 + k * v1,
          recursion_shift(e.kids[1], targets, env) + (k - 1) * v1 + k * v0);
    }
    case NodeKind::deriv:
      return recursion_shift(e.kids[0], targets, env) - 1;
    case NodeKind::bounded_sum: {
      IndexEnv inner = env;
      inner[e.name] = e.lower;
      return recursion_shift(e.kids[0], targets, inner);
    }
    case NodeKind::call: {
      long arg = recursion_shift(e.kids[0], targets, env);
      return is_target(e.name) ? std::min(arg, 0L) : arg;
    }
  }
  return unguarded;
}

inline void check_resolved(const SpeciesSystem& sys, const SpeciesExpr& e,
                           IndexEnv vars) {
  if (e.kind == NodeKind::name || e.kind == NodeKind::call) {
    if (sys.find(e.name) < 0)
      throw ParseError("unknown series '" + e.name + "'", e.line, e.column);
  }
  if (e.kind == NodeKind::lin || e.kind == NodeKind::cyc ||
      e.kind == NodeKind::polygon) {
    long lb = index_lower(e.index, vars, e.line, e.column);
    if (e.kind == NodeKind::polygon && lb < 3)
      throw ParseError("polygon size must be at least 3", e.line, e.column);
  }
  if (e.kind == NodeKind::bounded_sum) {
    if (e.lower < 0)
      throw ParseError("sum lower bound must be nonnegative", e.line, e.column);
    vars[e.name] = e.lower;
  }
  for (const SpeciesExpr& k : e.kids) check_resolved(sys, k, vars);
}

// Differentiating a series while it is still being solved would need
// one more layer of it than the iteration has; rejected statically.
inline void check_no_deriv_into(const SpeciesExpr& e,
                                const std::vector<std::string>& targets,
                                bool under_deriv) {
  if (under_deriv && (e.kind == NodeKind::name || e.kind == NodeKind::call) &&
      std::find(targets.begin(), targets.end(), e.name) != targets.end())
    throw ParseError("derivative of '" + e.name + "' inside its own recursion",
                     e.line, e.column);
  for (const SpeciesExpr& k : e.kids)
    check_no_deriv_into(k, targets, under_deriv || e.kind == NodeKind::deriv);
}

}  // namespace detail

// Resolution and guardedness.  Throws ParseError on a malformed system.
inline void check_species_system(const SpeciesSystem& sys) {
  for (const Binding& b : sys.bindings)
    detail::check_resolved(sys, b.expr, {});
  for (const std::vector<int>& scc : detail::binding_sccs(sys)) {
    std::vector<std::string> names;
    for (int i : scc) names.push_back(sys.bindings[i].name);
    bool recursive = scc.size() > 1;
    for (int i : scc)
      detail::walk_names(sys.bindings[i].expr, [&](const SpeciesExpr& e) {
        if (std::find(names.begin(), names.end(), e.name) != names.end())
          recursive = true;
      });
    if (!recursive) continue;
    for (int i : scc) {
      const Binding& b = sys.bindings[i];
      detail::check_no_deriv_into(b.expr, names, false);
      if (detail::recursion_shift(b.expr, names, {}) < 1)
        throw ParseError("unguarded recursion through '" + b.name + "'", b.line,
                         b.column);
    }
  }
}

// ---------------------------------------------------------------------
// Semantics.  The two interpretations share one evaluator; each policy
// supplies the value type and the species operations on it.

namespace detail {

// How deep each binding must be solved.  A derivative consumes one
// layer above its result, so demands grow along D() edges; every
// binding is an output and starts at the requested depth.
inline std::vector<int> solve_demands(const SpeciesSystem& sys, int truncation) {
  std::vector<std::vector<int>> sccs = binding_sccs(sys);
  std::vector<int> demand(sys.bindings.size(), truncation);
  auto bump = [&](const SpeciesExpr& e, int target, auto&& self) -> bool {
    bool moved = false;
    if (e.kind == NodeKind::name || e.kind == NodeKind::call) {
      int j = sys.find(e.name);
      if (j >= 0 && demand[j] < target) demand[j] = target, moved = true;
    }
    int child = target + (e.kind == NodeKind::deriv ? 1 : 0);
    for (const SpeciesExpr& k : e.kids) moved = self(k, child, self) || moved;
    return moved;
  };
  // Consumers first.  Within one component demands equalize; the static
  // no-derivative-into-own-recursion rule keeps this loop finite.
  for (auto it = sccs.rbegin(); it != sccs.rend(); ++it)
    for (bool moved = true; moved;) {
      moved = false;
      int widest = truncation;
      for (int i : *it) widest = std::max(widest, demand[i]);
      for (int i : *it)
        if (demand[i] < widest) demand[i] = widest, moved = true;
      for (int i : *it)
        moved = bump(sys.bindings[i].expr, demand[i], bump) || moved;
    }
  return demand;
}

struct OrdinarySemantics {
  using Value = CycleIndexSeries;

  static Value zero(int t) { return cis_zero(t); }
  static Value constant(long c, int t) { return cis_const(Rational(c), t); }
  static Value atom(int t) { return builtin_x(t); }
  static Value add(const Value& a, const Value& b) { return cis_add(a, b); }
  static Value sub(const Value& a, const Value& b) { return cis_sub(a, b); }
  static Value mul(const Value& a, const Value& b) { return cis_mul(a, b); }
  static Value set_of(const Value& g) { return exp_compose(g); }
  static Value compose(const Value& f, const Value& g) { return plethysm(f, g); }
  static Value derive(const Value& f) { return derivative(f); }
  static Value raise(const Value& v, int t) { return cis_retruncate(v, t); }
  static int truncation(const Value& v) { return v.truncation(); }
  static int valuation(const Value& v) { return v.valuation(); }

  static Value quotient(const Value&) {
    throw std::invalid_argument("quot2 requires equivariant solving");
  }

  static Value lin(long n, const Value& g, int t) {
    Value acc = constant(1, std::min(t, g.truncation()));
    for (long i = 0; i < n; ++i) acc = mul(acc, g);
    return acc;
  }

  static Value cyc(long n, const Value& g, int t) {
    PsPolynomial acc = ps_zero(std::min(t, g.truncation()));
    for (long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      Value s = cis_from_poly(ps_stretch(g.poly, static_cast<int>(d)));
      long phi = static_cast<long>(euler_phi(static_cast<std::uint64_t>(d)));
      acc = ps_add(acc, ps_scale(lin(n / d, s, t).poly, rational(phi, n)));
    }
    return cis_from_poly(std::move(acc));
  }

  static Value polygon(long k, const Value& v, const Value& a, int t) {
    return cyc(k, mul(v, a), t);
  }
};

struct EquivariantSemantics {
  using Value = S2Series;

  static Value zero(int t) { return s2_zero(t); }
  static Value constant(long c, int t) { return s2_const(Rational(c), t); }
  static Value atom(int t) { return g_x(t); }
  static Value add(const Value& a, const Value& b) { return g_add(a, b); }
  static Value sub(const Value& a, const Value& b) { return g_sub(a, b); }
  static Value mul(const Value& a, const Value& b) { return g_mul(a, b); }
  static Value set_of(const Value& g) { return g_exp_compose(g); }
  static Value compose(const Value& f, const Value& g) { return g_plethysm(f, g); }
  static Value derive(const Value& f) { return g_derivative(f); }
  static Value raise(const Value& v, int t) { return s2_retruncate(v, t); }
  static int truncation(const Value& v) { return v.truncation(); }
  static int valuation(const Value& v) { return v.valuation(); }

  static Value quotient(const Value& v) { return s2_trivial(quotient_s2(v)); }

  static PsPolynomial twist(const CycleIndexSeries& e, int t) {
    return ps_retruncate(ps_stretch(e.poly, 2), std::min(t, e.truncation()));
  }

  static PsPolynomial pspow(const PsPolynomial& p, long m, int t) {
    PsPolynomial acc = ps_const(1, t);
    for (long i = 0; i < m; ++i) acc = ps_mul(acc, p, t);
    return acc;
  }

  // Rows of n blocks; a reversal reflects the row and reverses each
  // block, so the middle block of an odd row keeps its own reversal.
  static Value lin(long n, const Value& g, int t) {
    int tt = std::min(t, truncation(g));
    CycleIndexSeries e = OrdinarySemantics::lin(n, g.part_e, t);
    PsPolynomial b = twist(g.part_e, tt);
    PsPolynomial tau = pspow(b, n / 2, tt);
    if (n % 2 == 1) tau = ps_mul(tau, g.part_tau.poly, tt);
    return {std::move(e), cis_from_poly(std::move(tau))};
  }

  // Cycles of n blocks; a reflection fixes one block (n odd) or two or
  // zero blocks (n even, axis through blocks or through gaps).
  static Value cyc(long n, const Value& g, int t) {
    int tt = std::min(t, truncation(g));
    CycleIndexSeries e = OrdinarySemantics::cyc(n, g.part_e, t);
    PsPolynomial b = twist(g.part_e, tt);
    PsPolynomial tau;
    if (n % 2 == 1) {
      tau = ps_mul(g.part_tau.poly, pspow(b, (n - 1) / 2, tt), tt);
    } else {
      PsPolynomial fixed2 = ps_mul(ps_mul(g.part_tau.poly, g.part_tau.poly, tt),
                                   pspow(b, (n - 2) / 2, tt), tt);
      tau = ps_scale(ps_add(fixed2, pspow(b, n / 2, tt)), rational(1, 2));
    }
    return {std::move(e), cis_from_poly(std::move(tau))};
  }

  // A cycle of k v-structures alternating with k a-structures.  A
  // reflection pairs the two kinds with a half-step offset: odd k fixes
  // one of each; even k fixes either two v-slots or two a-slots.
  static Value polygon(long k, const Value& v, const Value& a, int t) {
    int tt = std::min({t, truncation(v), truncation(a)});
    CycleIndexSeries e = OrdinarySemantics::cyc(k, cis_mul(v.part_e, a.part_e), t);
    PsPolynomial sv = twist(v.part_e, tt), sa = twist(a.part_e, tt);
    PsPolynomial tau;
    if (k % 2 == 1) {
      tau = ps_mul(ps_mul(v.part_tau.poly, a.part_tau.poly, tt),
                   ps_mul(pspow(sv, (k - 1) / 2, tt), pspow(sa, (k - 1) / 2, tt), tt),
                   tt);
    } else {
      PsPolynomial vert =
          ps_mul(ps_mul(v.part_tau.poly, v.part_tau.poly, tt),
                 ps_mul(pspow(sv, (k - 2) / 2, tt), pspow(sa, k / 2, tt), tt), tt);
      PsPolynomial edge =
          ps_mul(ps_mul(a.part_tau.poly, a.part_tau.poly, tt),
                 ps_mul(pspow(sa, (k - 2) / 2, tt), pspow(sv, k / 2, tt), tt), tt);
      tau = ps_scale(ps_add(vert, edge), rational(1, 2));
    }
    return {std::move(e), cis_from_poly(std::move(tau))};
  }
};

template <class Sem>
struct Evaluator {
  const SpeciesSystem& sys;
  const std::map<std::string, typename Sem::Value>& env;

  typename Sem::Value eval(const SpeciesExpr& e, int t, IndexEnv& vars) const {
    using V = typename Sem::Value;
    switch (e.kind) {
      case NodeKind::number:
        return Sem::constant(e.number, t);
      case NodeKind::atom:
        return Sem::atom(t);
      case NodeKind::name:
        return env.at(e.name);
      case NodeKind::add:
        return Sem::add(eval(e.kids[0], t, vars), eval(e.kids[1], t, vars));
      case NodeKind::sub:
        return Sem::sub(eval(e.kids[0], t, vars), eval(e.kids[1], t, vars));
      case NodeKind::mul:
        return Sem::mul(eval(e.kids[0], t, vars), eval(e.kids[1], t, vars));
      case NodeKind::set_of:
        return Sem::set_of(eval(e.kids[0], t, vars));
      case NodeKind::deriv:
        return Sem::derive(eval(e.kids[0], t + 1, vars));
      case NodeKind::quot:
        return Sem::quotient(eval(e.kids[0], t, vars));
      case NodeKind::call:
        return Sem::compose(env.at(e.name), eval(e.kids[0], t, vars));
      case NodeKind::lin:
      case NodeKind::cyc:
      case NodeKind::polygon: {
        V inner = eval(e.kids[0], t, vars);
        V edge = e.kind == NodeKind::polygon ? eval(e.kids[1], t, vars)
                                             : Sem::zero(t);
        auto apply = [&](long n) {
          switch (e.kind) {
            case NodeKind::lin: return Sem::lin(n, inner, t);
            case NodeKind::cyc: return Sem::cyc(n, inner, t);
            default: return Sem::polygon(n, inner, edge, t);
          }
        };
        if (e.index.kind == IndexKind::at_least) {
          long val = static_cast<long>(Sem::valuation(inner)) +
                     (e.kind == NodeKind::polygon
                          ? static_cast<long>(Sem::valuation(edge))
                          : 0L);
          if (val < 1)
            throw std::invalid_argument(
                "open-ended size range needs an argument without constant term");
          V acc = Sem::zero(t);
          for (long n = e.index.value; n <= t; ++n) acc = Sem::add(acc, apply(n));
          return acc;
        }
        return apply(index_lower(e.index, vars, e.line, e.column));
      }
      case NodeKind::bounded_sum: {
        std::optional<long> shadowed;
        if (auto it = vars.find(e.name); it != vars.end()) shadowed = it->second;
        V acc = Sem::zero(t);
        for (long i = e.lower; i <= t; ++i) {
          vars[e.name] = i;
          if (valuation_bound(e.kids[0], vars) < i)
            throw std::invalid_argument(
                "sum summand valuation does not reach its index (at index " +
                std::to_string(i) + ")");
          acc = Sem::add(acc, eval(e.kids[0], t, vars));
        }
        if (shadowed) vars[e.name] = *shadowed;
        else vars.erase(e.name);
        return acc;
      }
    }
    throw std::logic_error("unhandled node");
  }
};

}  // namespace detail

// Solve every binding to the requested truncation (or deeper where a
// derivative demands it).  A recursive component iterates layerwise
// from zero: before pass t its members are declared known through layer
// t, which guarded recursion justifies, and by induction pass t leaves
// layers up to t exact.  Settled layers are asserted stationary.
template <class Sem>
std::map<std::string, typename Sem::Value> solve_species_system(
    const SpeciesSystem& sys, int truncation) {
  if (truncation < 0) throw std::invalid_argument("negative truncation");
  check_species_system(sys);
  std::vector<int> demand = detail::solve_demands(sys, truncation);
  std::map<std::string, typename Sem::Value> env;
  detail::Evaluator<Sem> ev{sys, env};
  for (const std::vector<int>& scc : detail::binding_sccs(sys)) {
    bool recursive = scc.size() > 1;
    for (int i : scc)
      detail::walk_names(sys.bindings[i].expr, [&](const SpeciesExpr& e) {
        for (int j : scc) recursive = recursive || sys.bindings[j].name == e.name;
      });
    int depth = 0;
    for (int i : scc) depth = std::max(depth, demand[i]);
    if (!recursive) {
      const Binding& b = sys.bindings[scc[0]];
      detail::IndexEnv vars;
      typename Sem::Value v = ev.eval(b.expr, depth, vars);
      if (Sem::truncation(v) < depth)
        throw integrity_error("binding '" + b.name +
                              "' solved shallower than demanded");
      env[b.name] = std::move(v);
      continue;
    }
    for (int i : scc) env[sys.bindings[i].name] = Sem::zero(0);
    for (int t = 0; t <= depth; ++t) {
      for (int i : scc)
        env[sys.bindings[i].name] = Sem::raise(env[sys.bindings[i].name], t);
      for (int i : scc) {
        const Binding& b = sys.bindings[i];
        detail::IndexEnv vars;
        typename Sem::Value next = ev.eval(b.expr, t, vars);
        if (Sem::truncation(next) < t)
          throw integrity_error("binding '" + b.name +
                                "' lost layers during iteration " + std::to_string(t));
        next = Sem::raise(next, t);
        if (t > 1 && !(Sem::raise(next, t - 1) == env[b.name]))
          throw integrity_error("binding '" + b.name +
                                "' not stationary at layer " + std::to_string(t - 1));
        env[b.name] = std::move(next);
      }
    }
  }
  return env;
}

inline std::map<std::string, CycleIndexSeries> solve_species_ordinary(
    const SpeciesSystem& sys, int truncation) {
  return solve_species_system<detail::OrdinarySemantics>(sys, truncation);
}

inline std::map<std::string, S2Series> solve_species_equivariant(
    const SpeciesSystem& sys, int truncation) {
  return solve_species_system<detail::EquivariantSemantics>(sys, truncation);
}

// ---------------------------------------------------------------------
// Pretty-printing (round-trips through the parser).

namespace detail {

inline void print_index(std::string& out, const IndexExpr& ix) {
  switch (ix.kind) {
    case IndexKind::number: out += std::to_string(ix.value); break;
    case IndexKind::at_least: out += ">=" + std::to_string(ix.value); break;
    case IndexKind::variable: out += ix.var; break;
    case IndexKind::offset: out += ix.var + "+" + std::to_string(ix.value); break;
  }
}

inline void print_expr(std::string& out, const SpeciesExpr& e, int parent_prec) {
  auto wrap = [&](int prec, const std::function<void()>& body) {
    bool paren = prec < parent_prec;
    if (paren) out += "(";
    body();
    if (paren) out += ")";
  };
  switch (e.kind) {
    case NodeKind::number: out += std::to_string(e.number); break;
    case NodeKind::atom: out += "X"; break;
    case NodeKind::name: out += e.name; break;
    case NodeKind::add:
    case NodeKind::sub:
      wrap(1, [&] {
        print_expr(out, e.kids[0], 1);
        out += e.kind == NodeKind::add ? " + " : " - ";
        print_expr(out, e.kids[1], 2);
      });
      break;
    case NodeKind::mul:
      wrap(2, [&] {
        print_expr(out, e.kids[0], 2);
        out += " * ";
        print_expr(out, e.kids[1], 3);
      });
      break;
    case NodeKind::set_of:
    case NodeKind::deriv:
    case NodeKind::quot:
      out += e.kind == NodeKind::set_of ? "E(" : e.kind == NodeKind::deriv ? "D(" : "quot2(";
      print_expr(out, e.kids[0], 0);
      out += ")";
      break;
    case NodeKind::lin:
    case NodeKind::cyc:
    case NodeKind::polygon:
      out += e.kind == NodeKind::lin ? "L[" : e.kind == NodeKind::cyc ? "C[" : "P[";
      print_index(out, e.index);
      out += "](";
      print_expr(out, e.kids[0], 0);
      if (e.kind == NodeKind::polygon) {
        out += ", ";
        print_expr(out, e.kids[1], 0);
      }
      out += ")";
      break;
    case NodeKind::bounded_sum:
      out += "sum(" + e.name + ">=" + std::to_string(e.lower) + ", ";
      print_expr(out, e.kids[0], 0);
      out += ")";
      break;
    case NodeKind::call:
      out += e.name + "(";
      print_expr(out, e.kids[0], 0);
      out += ")";
      break;
  }
}

}  // namespace detail

inline std::string print_species(const SpeciesSystem& sys) {
  std::string out;
  for (const Binding& b : sys.bindings) {
    out += b.name + " = ";
    detail::print_expr(out, b.expr, 0);
    out += ";\n";
  }
  return out;
}

}  // namespace specount
