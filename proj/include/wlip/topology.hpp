#ifndef WLIP_TOPOLOGY_HPP_
#define WLIP_TOPOLOGY_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/metric.hpp"
#include "wlip/point_set.hpp"

namespace wlip {

/// Open families are materialised up to this many points; larger
/// topologies are kept as minimal neighbourhoods only.
inline constexpr std::size_t kMaxExplicitTopologyPoints = 16;

/// Largest n accepted by enumerate_topologies.
inline constexpr std::size_t kMaxEnumerationPoints = 5;

struct TopologyReport {
  std::vector<std::string> problems;
  std::optional<std::pair<PointSet, PointSet>> witness;

  bool ok() const noexcept { return problems.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& p : problems) s += (s.empty() ? "" : "; ") + p;
    return s.empty() ? "valid" : s;
  }
};

/// Checks that `opens` (with empty set and whole carrier implied only if listed)
/// contains both and is closed under pairwise union and intersection.
inline TopologyReport validate_topology(std::size_t n, std::span<const PointSet> opens) {
  require_carrier_size(n);
  TopologyReport r;
  const PointSet all = PointSet::full(n);
  std::vector<PointSet> fam(opens.begin(), opens.end());
  std::sort(fam.begin(), fam.end());
  fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
  const auto has = [&](PointSet s) { return std::binary_search(fam.begin(), fam.end(), s); };

  for (auto s : fam)
    if (!s.subset_of(all)) r.problems.push_back("set " + s.to_string() + " leaves the carrier");
  if (!has(PointSet())) r.problems.push_back("empty set missing");
  if (!has(all)) r.problems.push_back("carrier missing");
  for (std::size_t a = 0; a < fam.size(); ++a) {
    for (std::size_t b = a + 1; b < fam.size(); ++b) {
      if (!has(fam[a] | fam[b])) {
        r.problems.push_back(fam[a].to_string() + " U " + fam[b].to_string() + " missing");
        if (!r.witness) r.witness = {fam[a], fam[b]};
      }
      if (!has(fam[a] & fam[b])) {
        r.problems.push_back(fam[a].to_string() + " n " + fam[b].to_string() + " missing");
        if (!r.witness) r.witness = {fam[a], fam[b]};
      }
    }
  }
  return r;
}

/// Topology on a finite carrier. Every such topology is Alexandrov, so it is
/// determined by the minimal neighbourhood N(x) of each point.
class FiniteTopology {
 public:
  /// Validates and builds from an explicit open family.
  static FiniteTopology from_opens(std::size_t n, std::span<const PointSet> opens) {
    const auto report = validate_topology(n, opens);
    if (!report.ok()) throw Error(Errc::validation_error, report.summary());
    std::vector<PointSet> nb(n, PointSet::full(n));
    for (auto u : opens)
      for (auto x : u.elements()) nb[x] &= u;
    return FiniteTopology(n, std::move(nb));
  }

  /// N(x) must contain x and satisfy y in N(x) => N(y) subset of N(x).
  static FiniteTopology from_neighborhoods(std::vector<PointSet> nb) {
    const std::size_t n = nb.size();
    require_carrier_size(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (!nb[x].contains(x)) throw Error(Errc::validation_error, "N(x) must contain x");
      for (auto y : nb[x].elements())
        if (!nb[y].subset_of(nb[x])) throw Error(Errc::validation_error, "neighbourhoods are not nested");
    }
    return FiniteTopology(n, std::move(nb));
  }

  std::size_t size() const noexcept { return n_; }
  PointSet min_neighborhood(std::size_t x) const noexcept { return nb_[x]; }
  const std::vector<PointSet>& neighborhoods() const noexcept { return nb_; }

  bool is_open(PointSet u) const noexcept {
    for (auto x : u.elements())
      if (!nb_[x].subset_of(u)) return false;
    return true;
  }

  /// All opens in increasing bit order. Throws for carriers above the explicit limit.
  const std::vector<PointSet>& opens() const {
    if (n_ > kMaxExplicitTopologyPoints) {
      throw Error(Errc::too_many_points, "open family of a " + std::to_string(n_) + "-point topology");
    }
    return opens_;
  }

  /// Every open of *this is open in `finer`.
  bool coarser_or_equal(const FiniteTopology& finer) const {
    if (n_ != finer.n_) throw Error(Errc::carrier_mismatch, "topologies on different carriers");
    for (std::size_t x = 0; x < n_; ++x)
      if (!finer.nb_[x].subset_of(nb_[x])) return false;
    return true;
  }

  friend bool operator==(const FiniteTopology& a, const FiniteTopology& b) {
    return a.n_ == b.n_ && a.nb_ == b.nb_;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < opens().size(); ++i) s += (i ? "," : "") + opens()[i].to_string();
    return s + "}";
  }

 private:
  FiniteTopology(std::size_t n, std::vector<PointSet> nb) : n_(n), nb_(std::move(nb)) {
    if (n_ <= kMaxExplicitTopologyPoints) {
      const std::uint64_t limit = std::uint64_t{1} << n_;
      for (std::uint64_t bits = 0; bits < limit; ++bits)
        if (is_open(PointSet(bits))) opens_.push_back(PointSet(bits));
    }
  }

  std::size_t n_;
  std::vector<PointSet> nb_;
  std::vector<PointSet> opens_;
};

inline FiniteTopology discrete_topology(std::size_t n) {
  std::vector<PointSet> nb(n);
  for (std::size_t x = 0; x < n; ++x) nb[x] = PointSet::single(x);
  return FiniteTopology::from_neighborhoods(std::move(nb));
}

inline FiniteTopology indiscrete_topology(std::size_t n) {
  return FiniteTopology::from_neighborhoods(std::vector<PointSet>(n, PointSet::full(n)));
}

/// Smallest topology containing every set in `subbasis`.
inline FiniteTopology from_subbasis(std::size_t n, std::span<const PointSet> subbasis) {
  require_carrier_size(n);
  std::vector<PointSet> nb(n, PointSet::full(n));
  for (auto s : subbasis) {
    if (!s.subset_of(PointSet::full(n))) throw Error(Errc::validation_error, "set leaves the carrier");
    for (auto x : s.elements()) nb[x] &= s;
  }
  return FiniteTopology::from_neighborhoods(std::move(nb));
}

inline PointSet min_neighborhood(const FiniteTopology& t, std::size_t x) { return t.min_neighborhood(x); }

/// x <= y iff x lies in N(y).
inline Relation to_preorder(const FiniteTopology& t) {
  Relation r(t.size());
  for (std::size_t y = 0; y < t.size(); ++y)
    for (auto x : t.min_neighborhood(y).elements()) r.insert(x, y);
  return r;
}

/// Opens are the down-closed sets of a reflexive transitive relation.
inline FiniteTopology from_preorder(const Relation& le) {
  const std::size_t n = le.carrier_size();
  std::vector<PointSet> nb(n);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      if (le.contains(x, y)) nb[y].insert(x);
  for (std::size_t x = 0; x < n; ++x) {
    if (!le.contains(x, x)) throw Error(Errc::validation_error, "preorder is not reflexive");
  }
  if (!le.is_transitive()) throw Error(Errc::validation_error, "preorder is not transitive");
  return FiniteTopology::from_neighborhoods(std::move(nb));
}

/// Reflexive-transitive closure of an arbitrary relation.
inline Relation preorder_closure(Relation r) {
  const std::size_t n = r.carrier_size();
  for (std::size_t x = 0; x < n; ++x) r.insert(x, x);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r.contains(i, k))
        for (auto j : r.row(k).elements()) r.insert(i, j);
  return r;
}

/// Calls `emit(index, topology)` for every labelled topology on n points, in
/// lexicographic order of the preorder's relation matrix (row-major, first
/// entry most significant), starting at stream position `start`. Returns the
/// total count. `emit` may return false to stop early.
inline std::size_t for_each_topology(std::size_t n,
                                     const std::function<bool(std::size_t, const FiniteTopology&)>& emit,
                                     std::size_t start = 0) {
  require_carrier_size(n);
  if (n > kMaxEnumerationPoints) {
    throw Error(Errc::enumeration_limit, "enumeration is limited to n <= " + std::to_string(kMaxEnumerationPoints));
  }
  std::vector<PointPair> slots;  // off-diagonal cells, most significant first
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) slots.emplace_back(i, j);
  const std::size_t bits = slots.size();
  std::size_t index = 0;
  bool running = true;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    Relation r = Relation::identity(n);
    for (std::size_t b = 0; b < bits; ++b)
      if ((code >> (bits - 1 - b)) & 1U) r.insert(slots[b].first, slots[b].second);
    if (!r.is_transitive()) continue;
    if (running && index >= start) running = emit(index, from_preorder(r));
    ++index;
  }
  return index;
}

inline std::vector<FiniteTopology> enumerate_topologies(std::size_t n) {
  std::vector<FiniteTopology> out;
  for_each_topology(n, [&](std::size_t, const FiniteTopology& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

struct ContinuityVerdict {
  bool holds = true;
  std::optional<std::size_t> point;  ///< x with f(N(x)) not inside N(f(x))
  std::optional<PointSet> open;      ///< open V of the target whose preimage is not open
};

/// Decides continuity through minimal neighbourhoods: f(N(x)) within N(f(x)).
inline ContinuityVerdict is_continuous(const PointMap& f, const FiniteTopology& tx, const FiniteTopology& ty) {
  if (f.source_size() != tx.size() || f.target_size() != ty.size()) {
    throw Error(Errc::carrier_mismatch, "map does not match the topologies' carriers");
  }
  for (std::size_t x = 0; x < tx.size(); ++x) {
    const PointSet target = ty.min_neighborhood(f(x));
    if (!f.image(tx.min_neighborhood(x)).subset_of(target)) return {false, x, target};
  }
  return {};
}

/// Independent decider: every open preimage is open.
inline ContinuityVerdict is_continuous_by_preimages(const PointMap& f, const FiniteTopology& tx,
                                                    const FiniteTopology& ty) {
  if (f.source_size() != tx.size() || f.target_size() != ty.size()) {
    throw Error(Errc::carrier_mismatch, "map does not match the topologies' carriers");
  }
  for (auto v : ty.opens())
    if (!tx.is_open(f.preimage(v))) return {false, std::nullopt, v};
  return {};
}

}  // namespace wlip

#endif  // WLIP_TOPOLOGY_HPP_
