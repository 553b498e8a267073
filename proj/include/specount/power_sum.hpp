#pragma once

// Sparse exact-rational polynomials in the power-sum indeterminates
// p_1, p_2, ..., truncated by total weight.  weight(prod p_i^{e_i}) =
// sum i*e_i.  These are the raw values that cycle-index series are
// built from; everything here is pure and value-semantic.

#include "specount/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace specount {

// -------------------------------------------------------------------------
// Monomial

// (index, exponent) pairs, index-ascending, all exponents > 0.
// The empty list is the unit monomial (weight 0).
struct PowerSumMonomial {
  std::vector<std::pair<int, int>> parts;

  int weight() const {
    int w = 0;
    for (auto [i, e] : parts) w += i * e;
    return w;
  }
  bool is_unit() const { return parts.empty(); }

  bool operator==(const PowerSumMonomial& o) const { return parts == o.parts; }
};

// Total order: weight-major, then lexicographic on the part lists.  Using
// weight as the primary key keeps map iteration grouped by homogeneous
// layer, which the series code relies on.
inline int mono_cmp(const PowerSumMonomial& a, const PowerSumMonomial& b) {
  int wa = a.weight(), wb = b.weight();
  if (wa != wb) return wa < wb ? -1 : 1;
  if (a.parts < b.parts) return -1;
  if (b.parts < a.parts) return 1;
  return 0;
}

inline bool operator<(const PowerSumMonomial& a, const PowerSumMonomial& b) {
  return mono_cmp(a, b) < 0;
}

inline PowerSumMonomial mono_unit() { return {}; }

inline PowerSumMonomial mono_var(int index, int exponent = 1) {
  PowerSumMonomial m;
  if (exponent > 0) m.parts.emplace_back(index, exponent);
  return m;
}

// Merge of two exponent maps.
inline PowerSumMonomial mono_mul(const PowerSumMonomial& a, const PowerSumMonomial& b) {
  PowerSumMonomial r;
  r.parts.reserve(a.parts.size() + b.parts.size());
  auto ia = a.parts.begin(), ib = b.parts.begin();
  while (ia != a.parts.end() && ib != b.parts.end()) {
    if (ia->first < ib->first) r.parts.push_back(*ia++);
    else if (ib->first < ia->first) r.parts.push_back(*ib++);
    else {
      r.parts.emplace_back(ia->first, ia->second + ib->second);
      ++ia; ++ib;
    }
  }
  r.parts.insert(r.parts.end(), ia, a.parts.end());
  r.parts.insert(r.parts.end(), ib, b.parts.end());
  return r;
}

// p_j -> p_{k*j} for every index j; weight scales by k.
inline PowerSumMonomial mono_stretch(const PowerSumMonomial& m, int k) {
  PowerSumMonomial r = m;
  for (auto& [i, e] : r.parts) i *= k;
  return r;
}

inline std::string to_string(const PowerSumMonomial& m) {
  if (m.is_unit()) return "1";
  std::string s;
  for (auto [i, e] : m.parts) {
    if (!s.empty()) s += "*";
    s += "p" + std::to_string(i);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

namespace detail {

struct MonoHash {
  std::size_t operator()(const PowerSumMonomial& m) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto [i, e] : m.parts) {
      h = (h ^ static_cast<std::uint64_t>(i)) * 1099511628211ull;
      h = (h ^ static_cast<std::uint64_t>(e)) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Process-wide monomial registry.  Multiplication hot loops work on dense
// integer ids instead of repeated map lookups keyed by part vectors.  Ids
// never appear in results or outputs, so interning order cannot affect
// observable behavior.
class MonomialTable {
public:
  static MonomialTable& instance() {
    static MonomialTable t;
    return t;
  }

  int intern(const PowerSumMonomial& m) {
    {
      std::shared_lock lock(mu_);
      auto it = index_.find(m);
      if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = index_.try_emplace(m, static_cast<int>(monos_.size()));
    if (inserted) {
      monos_.push_back(m);
      weights_.push_back(m.weight());
    }
    return it->second;
  }

  const PowerSumMonomial& mono(int id) const {
    std::shared_lock lock(mu_);
    return monos_[id];
  }
  int weight(int id) const {
    std::shared_lock lock(mu_);
    return weights_[id];
  }

private:
  mutable std::shared_mutex mu_;
  std::unordered_map<PowerSumMonomial, int, MonoHash> index_;
  std::deque<PowerSumMonomial> monos_;  // stable storage
  std::deque<int> weights_;
};

}  // namespace detail

// -------------------------------------------------------------------------
// PsPolynomial

// Truncated sparse polynomial: no zero coefficients stored, no stored
// monomial of weight above `truncation`.  Two polynomials compare equal
// when their terms agree up to the smaller truncation.
struct PsPolynomial {
  int truncation = 0;
  std::map<PowerSumMonomial, Rational> terms;

  bool is_zero() const { return terms.empty(); }

  // Smallest weight carrying a nonzero term; INT_MAX for the zero value.
  int valuation() const {
    if (terms.empty()) return std::numeric_limits<int>::max();
    return terms.begin()->first.weight();
  }

  Rational coefficient(const PowerSumMonomial& m) const {
    auto it = terms.find(m);
    return it == terms.end() ? Rational(0) : it->second;
  }
};

inline PsPolynomial ps_zero(int truncation) { return {truncation, {}}; }

inline PsPolynomial ps_term(const PowerSumMonomial& m, const Rational& c, int truncation) {
  PsPolynomial p{truncation, {}};
  if (c != 0 && m.weight() <= truncation) p.terms.emplace(m, c);
  return p;
}

inline PsPolynomial ps_const(const Rational& c, int truncation) {
  return ps_term(mono_unit(), c, truncation);
}

inline PsPolynomial ps_var(int index, int truncation) {
  return ps_term(mono_var(index), 1, truncation);
}

// Throws on any representation-invariant violation.  Cheap relative to
// arithmetic, so it runs after every operation in assert-enabled builds.
inline void ps_validate(const PsPolynomial& p) {
  for (const auto& [m, c] : p.terms) {
    if (c == 0) throw std::logic_error("PsPolynomial: stored zero coefficient");
    if (m.weight() > p.truncation)
      throw std::logic_error("PsPolynomial: monomial exceeds truncation");
    int prev = 0;
    for (auto [i, e] : m.parts) {
      if (i <= prev || e <= 0)
        throw std::logic_error("PsPolynomial: malformed monomial");
      prev = i;
    }
  }
}

namespace detail {
inline void maybe_validate(const PsPolynomial& p) {
#ifndef NDEBUG
  ps_validate(p);
#else
  (void)p;
#endif
}
}  // namespace detail

inline PsPolynomial ps_add(const PsPolynomial& a, const PsPolynomial& b) {
  PsPolynomial r{std::min(a.truncation, b.truncation), {}};
  auto ia = a.terms.begin(), ib = b.terms.begin();
  auto flush = [&](std::map<PowerSumMonomial, Rational>::const_iterator& it,
                   const std::map<PowerSumMonomial, Rational>& src) {
    for (; it != src.end(); ++it)
      if (it->first.weight() <= r.truncation) r.terms.emplace_hint(r.terms.end(), *it);
  };
  while (ia != a.terms.end() && ib != b.terms.end()) {
    int c = mono_cmp(ia->first, ib->first);
    if (c < 0) {
      if (ia->first.weight() <= r.truncation)
        r.terms.emplace_hint(r.terms.end(), *ia);
      ++ia;
    } else if (c > 0) {
      if (ib->first.weight() <= r.truncation)
        r.terms.emplace_hint(r.terms.end(), *ib);
      ++ib;
    } else {
      Rational s = ia->second + ib->second;
      if (s != 0 && ia->first.weight() <= r.truncation)
        r.terms.emplace_hint(r.terms.end(), ia->first, std::move(s));
      ++ia; ++ib;
    }
  }
  flush(ia, a.terms);
  flush(ib, b.terms);
  detail::maybe_validate(r);
  return r;
}

inline PsPolynomial ps_negate(const PsPolynomial& a) {
  PsPolynomial r{a.truncation, {}};
  for (const auto& [m, c] : a.terms) r.terms.emplace_hint(r.terms.end(), m, -c);
  return r;
}

inline PsPolynomial ps_sub(const PsPolynomial& a, const PsPolynomial& b) {
  return ps_add(a, ps_negate(b));
}

inline PsPolynomial ps_scale(const PsPolynomial& a, const Rational& c) {
  if (c == 0) return ps_zero(a.truncation);
  PsPolynomial r{a.truncation, {}};
  for (const auto& [m, k] : a.terms) r.terms.emplace_hint(r.terms.end(), m, k * c);
  return r;
}

namespace detail {

// Dense coefficient accumulator keyed by interned monomial id.  Used by
// multiplication and plethysm to avoid one ordered-map lookup per product
// pair; harvested back into the canonical sorted representation once.
class Accumulator {
public:
  explicit Accumulator(int truncation) : truncation_(truncation) {}

  void add(int id, const Rational& c) {
    if (static_cast<std::size_t>(id) >= acc_.size()) {
      acc_.resize(id + 1);
      present_.resize(id + 1, false);
    }
    if (!present_[id]) {
      present_[id] = true;
      touched_.push_back(id);
      acc_[id] = c;
    } else {
      mpq_add(acc_[id].get_mpq_t(), acc_[id].get_mpq_t(), c.get_mpq_t());
    }
  }

  void add_mul(int id, const Rational& a, const Rational& b) {
    mpq_mul(scratch_.get_mpq_t(), a.get_mpq_t(), b.get_mpq_t());
    add(id, scratch_);
  }

  // c * P, every term interned on the fly.
  void add_scaled(const PsPolynomial& p, const Rational& c) {
    auto& table = MonomialTable::instance();
    for (const auto& [m, k] : p.terms) {
      if (m.weight() > truncation_) break;
      add_mul(table.intern(m), k, c);
    }
  }

  PsPolynomial take() {
    auto& table = MonomialTable::instance();
    std::vector<std::pair<const PowerSumMonomial*, int>> keys;
    keys.reserve(touched_.size());
    for (int id : touched_)
      if (acc_[id] != 0) keys.emplace_back(&table.mono(id), id);
    std::sort(keys.begin(), keys.end(),
              [](const auto& x, const auto& y) { return *x.first < *y.first; });
    PsPolynomial r{truncation_, {}};
    for (auto& [mp, id] : keys)
      r.terms.emplace_hint(r.terms.end(), *mp, std::move(acc_[id]));
    maybe_validate(r);
    return r;
  }

  int truncation() const { return truncation_; }

private:
  int truncation_;
  std::vector<Rational> acc_;
  std::vector<bool> present_;
  std::vector<int> touched_;
  Rational scratch_;
};

struct FlatTerm {
  int weight;
  int id;
  const Rational* coeff;
};

inline std::vector<FlatTerm> flatten(const PsPolynomial& p, int max_weight) {
  auto& table = MonomialTable::instance();
  std::vector<FlatTerm> v;
  v.reserve(p.terms.size());
  for (const auto& [m, c] : p.terms) {
    int w = m.weight();
    if (w > max_weight) break;  // weight-major order
    v.push_back({w, table.intern(m), &c});
  }
  return v;
}

}  // namespace detail

// Truncated product; pairs whose combined weight exceeds the result
// truncation are skipped.  The optional third argument tightens the
// result truncation below min(a, b).
inline PsPolynomial ps_mul(const PsPolynomial& a, const PsPolynomial& b,
                           int target_truncation = std::numeric_limits<int>::max()) {
  int n = std::min({a.truncation, b.truncation, target_truncation});
  detail::Accumulator acc(n);
  auto fa = detail::flatten(a, n);
  auto fb = detail::flatten(b, n);
  auto& table = detail::MonomialTable::instance();
  PowerSumMonomial scratch;
  for (const auto& ta : fa) {
    int budget = n - ta.weight;
    const PowerSumMonomial& ma = table.mono(ta.id);
    for (const auto& tb : fb) {
      if (tb.weight > budget) break;
      scratch = mono_mul(ma, table.mono(tb.id));
      acc.add_mul(table.intern(scratch), *ta.coeff, *tb.coeff);
    }
  }
  return acc.take();
}

// P * c * m.  Shifting every term up by weight(m) also shifts what is
// known: the product is determined through p.truncation + weight(m).
inline PsPolynomial ps_mul_term(const PsPolynomial& p, const PowerSumMonomial& m,
                                const Rational& c,
                                int target_truncation = std::numeric_limits<int>::max()) {
  int wm = m.weight();
  long long known = static_cast<long long>(p.truncation) + wm;
  int n = known < target_truncation ? static_cast<int>(known) : target_truncation;
  if (c == 0) return ps_zero(n);
  std::vector<std::pair<PowerSumMonomial, Rational>> out;
  out.reserve(p.terms.size());
  for (const auto& [mm, k] : p.terms) {
    if (mm.weight() + wm > n) break;
    out.emplace_back(mono_mul(mm, m), k * c);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  PsPolynomial r{n, {}};
  for (auto& [mm, k] : out) r.terms.emplace_hint(r.terms.end(), std::move(mm), std::move(k));
  detail::maybe_validate(r);
  return r;
}

// p_j -> p_{k*j}; weights scale by k, overflowing terms are discarded.
inline PsPolynomial ps_stretch(const PsPolynomial& a, int k) {
  if (k < 1) throw std::invalid_argument("ps_stretch: k must be >= 1");
  if (k == 1) return a;
  PsPolynomial r{a.truncation, {}};
  for (const auto& [m, c] : a.terms) {
    if (m.weight() * k > r.truncation) break;
    r.terms.emplace_hint(r.terms.end(), mono_stretch(m, k), c);
  }
  detail::maybe_validate(r);
  return r;
}

// Keep only the terms with lo <= weight <= hi.
inline PsPolynomial ps_weight_range(const PsPolynomial& a, int lo, int hi) {
  PsPolynomial r{a.truncation, {}};
  for (const auto& [m, c] : a.terms) {
    int w = m.weight();
    if (w > hi) break;
    if (w >= lo) r.terms.emplace_hint(r.terms.end(), m, c);
  }
  return r;
}

inline PsPolynomial ps_retruncate(const PsPolynomial& a, int truncation) {
  PsPolynomial r{truncation, {}};
  for (const auto& [m, c] : a.terms) {
    if (m.weight() > truncation) break;
    r.terms.emplace_hint(r.terms.end(), m, c);
  }
  return r;
}

// Equality at the common truncation.
inline bool operator==(const PsPolynomial& a, const PsPolynomial& b) {
  int n = std::min(a.truncation, b.truncation);
  auto ia = a.terms.begin(), ib = b.terms.begin();
  while (true) {
    while (ia != a.terms.end() && ia->first.weight() > n) ++ia;
    while (ib != b.terms.end() && ib->first.weight() > n) ++ib;
    if (ia == a.terms.end() || ib == b.terms.end())
      return ia == a.terms.end() && ib == b.terms.end();
    if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    ++ia; ++ib;
  }
}

inline std::string to_string(const PsPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    if (!m.is_unit()) os << "*" << to_string(m);
  }
  return os.str();
}

}  // namespace specount
