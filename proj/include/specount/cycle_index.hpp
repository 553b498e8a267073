#pragma once

// Cycle-index series: power-sum polynomials organized by homogeneous
// weight layers, with the operations that make them a calculus for
// species counting — plethysm (composition), exponential composition,
// the p1-derivative, layer restriction, and count extraction.
//
// A series is "exact_polynomial" when the stored terms are the whole
// value, not just its truncation.  The flag widens what plethysm
// accepts (a polynomial outer tolerates constant terms in the inner
// series) and lets the derivative keep full precision.

#include "specount/power_sum.hpp"
#include "specount/rational.hpp"

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace specount {

struct CycleIndexSeries {
  PsPolynomial poly;
  bool exact_polynomial = false;

  int truncation() const { return poly.truncation; }
  bool is_zero() const { return poly.is_zero(); }
  int valuation() const { return poly.valuation(); }

  // Largest weight actually carrying a term (0 for the zero series).
  int max_weight() const {
    return poly.terms.empty() ? 0 : poly.terms.rbegin()->first.weight();
  }
};

inline CycleIndexSeries cis_zero(int truncation) {
  return {ps_zero(truncation), true};
}

inline CycleIndexSeries cis_const(const Rational& c, int truncation) {
  return {ps_const(c, truncation), true};
}

inline CycleIndexSeries cis_from_poly(PsPolynomial p, bool exact = false) {
  return {std::move(p), exact};
}

// Homogeneous weight-n slice, kept at the parent truncation.
inline PsPolynomial layer(const CycleIndexSeries& f, int n) {
  return ps_weight_range(f.poly, n, n);
}

// Change the truncation, dropping overweight terms.  Raising the
// truncation asserts knowledge the caller must actually have (fixed-point
// solvers do); exactness survives only when nothing was dropped.
inline CycleIndexSeries cis_retruncate(const CycleIndexSeries& f, int truncation) {
  bool exact = f.exact_polynomial && f.max_weight() <= truncation;
  return {ps_retruncate(f.poly, truncation), exact};
}

inline bool operator==(const CycleIndexSeries& a, const CycleIndexSeries& b) {
  return a.poly == b.poly;
}

inline CycleIndexSeries cis_add(const CycleIndexSeries& a, const CycleIndexSeries& b) {
  PsPolynomial p = ps_add(a.poly, b.poly);
  bool exact = a.exact_polynomial && b.exact_polynomial &&
               a.max_weight() <= p.truncation && b.max_weight() <= p.truncation;
  return {std::move(p), exact};
}

inline CycleIndexSeries cis_sub(const CycleIndexSeries& a, const CycleIndexSeries& b) {
  PsPolynomial p = ps_sub(a.poly, b.poly);
  bool exact = a.exact_polynomial && b.exact_polynomial &&
               a.max_weight() <= p.truncation && b.max_weight() <= p.truncation;
  return {std::move(p), exact};
}

inline CycleIndexSeries cis_scale(const CycleIndexSeries& a, const Rational& c) {
  return {ps_scale(a.poly, c), a.exact_polynomial};
}

inline CycleIndexSeries cis_mul(const CycleIndexSeries& a, const CycleIndexSeries& b,
                                int target_truncation = std::numeric_limits<int>::max()) {
  PsPolynomial p = ps_mul(a.poly, b.poly, target_truncation);
  bool exact = a.exact_polynomial && b.exact_polynomial &&
               a.max_weight() + b.max_weight() <= p.truncation;
  return {std::move(p), exact};
}

namespace detail {

// Substitution core shared by ordinary and group-twisted composition.
// `base(i)` supplies the series whose k-stretch replaces p_i; ordinary
// plethysm uses base(i) = G throughout, the twisted variant switches on
// the parity of i.  Powers of each stretched series are cached because
// outer monomials are visited in part-lexicographic order and reuse the
// partial product of their shared prefix.
class SubstitutionEngine {
public:
  SubstitutionEngine(std::function<const PsPolynomial&(int)> base, int truncation)
      : base_(std::move(base)), n_(truncation) {}

  const PsPolynomial& stretch_power(int index, int exponent) {
    auto& powers = cache_[index];
    if (powers.empty()) {
      powers.push_back(ps_const(1, n_));
      powers.push_back(ps_retruncate(ps_stretch(base_(index), index), n_));
    }
    while (static_cast<int>(powers.size()) <= exponent)
      powers.push_back(ps_mul(powers.back(), powers[1], n_));
    return powers[exponent];
  }

  // Substitute into every monomial of `outer`, accumulating coefficients.
  PsPolynomial run(const PsPolynomial& outer) {
    // Outer monomials above the result truncation still matter when the
    // base series has a constant term; when it does not, their stretched
    // products vanish and the zero-prefix break below skips them cheaply.
    std::vector<const std::pair<const PowerSumMonomial, Rational>*> ms;
    ms.reserve(outer.terms.size());
    for (const auto& t : outer.terms) ms.push_back(&t);
    std::sort(ms.begin(), ms.end(), [](const auto* x, const auto* y) {
      return x->first.parts < y->first.parts;
    });

    Accumulator acc(n_);
    std::vector<PsPolynomial> prefix{ps_const(1, n_)};
    const PowerSumMonomial* prev = nullptr;
    for (const auto* t : ms) {
      const auto& parts = t->first.parts;
      std::size_t keep = 0;
      if (prev) {
        std::size_t lim = std::min(parts.size(), prev->parts.size());
        while (keep < lim && parts[keep] == prev->parts[keep]) ++keep;
        // The previous walk may have stopped early on a zero prefix.
        keep = std::min(keep, prefix.size() - 1);
      }
      prefix.resize(keep + 1);
      for (std::size_t j = keep; j < parts.size(); ++j) {
        auto [i, e] = parts[j];
        prefix.push_back(ps_mul(prefix.back(), stretch_power(i, e), n_));
        if (prefix.back().is_zero()) break;
      }
      if (static_cast<int>(prefix.size()) == static_cast<int>(parts.size()) + 1)
        acc.add_scaled(prefix.back(), t->second);
      prev = &t->first;
    }
    return acc.take();
  }

  // exp(sum_i stretch(base(i), i)/i), the set-species composition.
  // Requires every base series to have valuation >= 1.
  PsPolynomial run_exp() {
    PsPolynomial s = ps_zero(n_);
    for (int i = 1; i <= n_; ++i)
      s = ps_add(s, ps_scale(ps_retruncate(ps_stretch(base_(i), i), n_), rational(1, i)));
    PsPolynomial result = ps_const(1, n_);
    PsPolynomial term = ps_const(1, n_);
    for (int k = 1; k <= n_ && !term.is_zero(); ++k) {
      term = ps_scale(ps_mul(term, s, n_), rational(1, k));
      result = ps_add(result, term);
    }
    return result;
  }

private:
  std::function<const PsPolynomial&(int)> base_;
  int n_;
  std::unordered_map<int, std::vector<PsPolynomial>> cache_;
};

}  // namespace detail

// F with each p_i replaced by stretch(G, i).  The inner series may have
// a constant term only when the outer is an exact polynomial; otherwise
// the substitution would need infinitely many outer layers.
inline CycleIndexSeries plethysm(const CycleIndexSeries& f, const CycleIndexSeries& g) {
  int n = std::min(f.truncation(), g.truncation());
  if (g.valuation() < 1 && !f.exact_polynomial)
    throw std::invalid_argument(
        "plethysm: inner series has a constant term and outer is not a polynomial");
  detail::SubstitutionEngine engine([&](int) -> const PsPolynomial& { return g.poly; }, n);
  PsPolynomial p = engine.run(f.poly);
  bool exact = f.exact_polynomial && g.exact_polynomial &&
               f.max_weight() * std::max(g.max_weight(), 1) <= n;
  return {std::move(p), exact};
}

// Composition with the set species on the outside:
// exp(sum_{i>=1} stretch(G, i)/i).
inline CycleIndexSeries exp_compose(const CycleIndexSeries& g) {
  if (g.valuation() < 1)
    throw std::invalid_argument("exp_compose: inner series must have zero constant term");
  detail::SubstitutionEngine engine([&](int) -> const PsPolynomial& { return g.poly; },
                                    g.truncation());
  return {engine.run_exp(), false};
}

// Formal partial derivative with respect to p1; layer n+1 feeds layer n,
// so a truncated input loses one layer of precision.
inline CycleIndexSeries derivative(const CycleIndexSeries& f) {
  int n = f.exact_polynomial ? f.truncation() : std::max(f.truncation() - 1, 0);
  std::vector<std::pair<PowerSumMonomial, Rational>> out;
  for (const auto& [m, c] : f.poly.terms) {
    if (m.parts.empty() || m.parts.front().first != 1) continue;
    int e = m.parts.front().second;
    PowerSumMonomial d = m;
    if (e == 1) d.parts.erase(d.parts.begin());
    else d.parts.front().second = e - 1;
    if (d.weight() <= n) out.emplace_back(std::move(d), c * e);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  PsPolynomial p{n, {}};
  for (auto& [m, c] : out) p.terms.emplace_hint(p.terms.end(), std::move(m), std::move(c));
  detail::maybe_validate(p);
  return {std::move(p), f.exact_polynomial};
}

// Keep only layers lo..hi.  The result is a complete polynomial: every
// discarded layer is known to be zero.
inline CycleIndexSeries restrict_layers(const CycleIndexSeries& f, int lo, int hi) {
  if (lo < 0 || hi > f.truncation())
    throw std::invalid_argument("restrict_layers: range outside truncation");
  return {ps_weight_range(f.poly, lo, hi), true};
}

// ---------------------------------------------------------------------
// Count extraction

inline Rational labeled_coefficient(const CycleIndexSeries& f, int n) {
  return f.poly.coefficient(n == 0 ? mono_unit() : mono_var(1, n));
}

// n! * [p1^n]; every species-valued series yields a nonnegative integer,
// so anything else is reported as data corruption, not user error.
inline Integer labeled_count(const CycleIndexSeries& f, int n) {
  Rational c = labeled_coefficient(f, n) * factorial(n);
  Integer out;
  if (!rational_to_integer(c, out) || out < 0)
    throw integrity_error("labeled count at n=" + std::to_string(n) +
                          " is not a nonnegative integer: " + c.get_str());
  return out;
}

// Coefficient of x^n after p_i -> x^i; by homogeneity this is the plain
// sum of the layer-n coefficients.
inline Integer unlabeled_count(const CycleIndexSeries& f, int n) {
  Rational s = 0;
  for (const auto& [m, c] : f.poly.terms) {
    int w = m.weight();
    if (w > n) break;
    if (w == n) s += c;
  }
  Integer out;
  if (!rational_to_integer(s, out) || out < 0)
    throw integrity_error("unlabeled count at n=" + std::to_string(n) +
                          " is not a nonnegative integer: " + s.get_str());
  return out;
}

// ---------------------------------------------------------------------
// Built-in species

// Singleton: one structure on a one-element set.
inline CycleIndexSeries builtin_x(int truncation) {
  return {ps_var(1, truncation), truncation >= 1};
}

// Sets of any size.
inline CycleIndexSeries builtin_e(int truncation) {
  return exp_compose(builtin_x(truncation));
}

// Sets of size exactly n.
inline CycleIndexSeries builtin_e_n(int n, int truncation) {
  if (n < 0) throw std::invalid_argument("builtin_e_n: negative size");
  if (n > truncation) return cis_zero(truncation);
  CycleIndexSeries r = restrict_layers(builtin_e(truncation), n, n);
  r.exact_polynomial = true;
  return r;
}

// Linear orders of length n: p1^n (only the identity fixes one).
inline CycleIndexSeries builtin_l(int n, int truncation) {
  if (n < 0) throw std::invalid_argument("builtin_l: negative length");
  if (n > truncation) return {ps_zero(truncation), false};
  return {ps_term(mono_var(1, n), 1, truncation), true};
}

// Cyclic orders of length n: (1/n) sum_{d|n} phi(d) p_d^{n/d}.
inline CycleIndexSeries builtin_c(int n, int truncation) {
  if (n < 1) throw std::invalid_argument("builtin_c: length must be >= 1");
  if (n > truncation) return {ps_zero(truncation), false};
  PsPolynomial p = ps_zero(truncation);
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    p = ps_add(p, ps_term(mono_var(d, n / d),
                          rational(Integer(euler_phi(d)), Integer(n)), truncation));
  }
  return {std::move(p), true};
}

}  // namespace specount
