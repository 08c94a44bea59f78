#ifndef WLIP_TESTS_FIXTURES_HPP_
#define WLIP_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <vector>

#include "wlip/wlip.hpp"

namespace wlip::testing {

inline const ExtValue kInf = ExtValue::infinity();

/// [[0,0,1],[0,0,1],[1,1,2]]
inline WeakPseudoMetric m1() { return WeakPseudoMetric::make({{0, 0, 1}, {0, 0, 1}, {1, 1, 2}}); }

/// [[1,1],[1,0]]
inline WeakPseudoMetric mw() { return WeakPseudoMetric::make({{1, 1}, {1, 0}}); }

/// [[0,1],[1,0]]
inline WeakPseudoMetric disc2() { return WeakPseudoMetric::make({{0, 1}, {1, 0}}); }

inline WeakPseudoMetric zero_metric(std::size_t n) { return WeakPseudoMetric::make(Matrix(n, ExtValue(0))); }

inline WeakPseudoMetric d_a(std::size_t n, PointSet a) { return characteristic_metric(n, a); }

inline StructureBase base_of(std::vector<WeakPseudoMetric> gens) { return StructureBase::make(std::move(gens)); }

/// Every symmetric n x n matrix over `grid`; diagonal fixed to 0 when `pseudo`.
inline std::vector<Matrix> symmetric_grid(std::size_t n, const std::vector<ExtValue>& grid, bool pseudo) {
  std::vector<PointPair> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (!(pseudo && i == j)) cells.emplace_back(i, j);
  std::vector<Matrix> out;
  std::vector<std::size_t> digit(cells.size(), 0);
  for (;;) {
    Matrix m(n, ExtValue(0));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      m(cells[c].first, cells[c].second) = grid[digit[c]];
      m(cells[c].second, cells[c].first) = grid[digit[c]];
    }
    out.push_back(std::move(m));
    std::size_t c = 0;
    while (c < cells.size() && ++digit[c] == grid.size()) digit[c++] = 0;
    if (c == cells.size()) break;
  }
  return out;
}

/// Valid weak pseudo-metrics (pseudo-metrics when `pseudo`) over `grid`.
inline std::vector<WeakPseudoMetric> metric_grid(std::size_t n, const std::vector<ExtValue>& grid, bool pseudo,
                                                 ValueMode mode = ValueMode::strict) {
  std::vector<WeakPseudoMetric> out;
  for (auto& m : symmetric_grid(n, grid, pseudo))
    if (validate_weak_pm(m, mode).ok()) out.push_back(WeakPseudoMetric::make(std::move(m), mode));
  return out;
}

/// Every family of subsets of an n-point carrier closed under pairwise union
/// and intersection and containing the empty set and the carrier.
inline std::vector<std::vector<PointSet>> brute_force_topologies(std::size_t n) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<PointSet>> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    const auto in = [&](PointSet s) { return (fam >> s.bits()) & 1U; };
    if (!in(PointSet()) || !in(PointSet::full(n))) continue;
    bool ok = true;
    for (std::size_t a = 0; a < subsets && ok; ++a)
      for (std::size_t b = 0; b < subsets && ok; ++b)
        if (in(PointSet(a)) && in(PointSet(b))) ok = in(PointSet(a) | PointSet(b)) && in(PointSet(a) & PointSet(b));
    if (!ok) continue;
    std::vector<PointSet> opens;
    for (std::size_t s = 0; s < subsets; ++s)
      if (in(PointSet(s))) opens.push_back(PointSet(s));
    out.push_back(std::move(opens));
  }
  return out;
}

/// Membership by search: some non-empty subset S of generators and some
/// alpha among the entry ratios d(p) / sup(S)(p) with d <= alpha sup(S).
inline bool member_by_search(const WeakPseudoMetric& d, const StructureBase& b) {
  const auto& gens = b.generators();
  const std::size_t n = d.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << gens.size()); ++mask) {
    const auto idx = PointSet(mask).elements();
    PreMetricForm s = gens[idx.front()].form();
    for (std::size_t t = 1; t < idx.size(); ++t) s = sup_metric(s, gens[idx[t]]);
    std::vector<Rational> alphas{Rational(1)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d(i, j).is_finite() && s(i, j).is_finite() && !d(i, j).is_zero() && !s(i, j).is_zero()) {
          alphas.push_back(d(i, j).value() / s(i, j).value());
        }
    for (const auto& alpha : alphas) {
      bool below = true;
      for (std::size_t i = 0; i < n && below; ++i)
        for (std::size_t j = 0; j < n && below; ++j) below = d(i, j) <= s(i, j).scaled(alpha);
      if (below) return true;
    }
  }
  return false;
}

}  // namespace wlip::testing

#endif  // WLIP_TESTS_FIXTURES_HPP_
