#pragma once

// Final per-n output of a solve: exact labeled and unlabeled counts,
// indexed 0..max_n.  This is what tables, CSV, and JSON are rendered
// from and what oracle comparisons consume.

#include "specount/cycle_index.hpp"
#include "specount/rational.hpp"

#include <vector>

namespace specount {

struct CountsTable {
  int max_n = 0;
  std::vector<Integer> labeled;    // size max_n + 1
  std::vector<Integer> unlabeled;  // size max_n + 1

  bool operator==(const CountsTable&) const = default;
};

// Extract both count families from a solved series.  Throws
// integrity_error if any entry fails to be a nonnegative integer.
inline CountsTable counts_from_series(const CycleIndexSeries& f, int max_n) {
  if (max_n > f.truncation())
    throw std::invalid_argument("counts_from_series: max_n exceeds truncation");
  CountsTable t;
  t.max_n = max_n;
  t.labeled.reserve(max_n + 1);
  t.unlabeled.reserve(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    t.labeled.push_back(labeled_count(f, n));
    t.unlabeled.push_back(unlabeled_count(f, n));
  }
  return t;
}

}  // namespace specount
