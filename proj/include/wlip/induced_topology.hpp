#ifndef WLIP_INDUCED_TOPOLOGY_HPP_
#define WLIP_INDUCED_TOPOLOGY_HPP_

#include <span>
#include <vector>

#include "wlip/metric.hpp"
#include "wlip/structures.hpp"
#include "wlip/topology.hpp"

namespace wlip {

/// Topology generated by every legal ball of every metric in the family.
inline FiniteTopology topology_from_family(std::span<const WeakPseudoMetric> family) {
  if (family.empty()) throw Error(Errc::validation_error, "empty metric family");
  const std::size_t n = family.front().size();
  std::vector<PointSet> subbasis;
  for (const auto& d : family) {
    if (d.size() != n) throw Error(Errc::carrier_mismatch, "family members on different carriers");
    for (std::size_t x = 0; x < n; ++x)
      for (const auto& entry : ball_family(d, x)) subbasis.push_back(entry.set);
  }
  return from_subbasis(n, subbasis);
}

/// Topology generated by the balls of every member of the generated
/// structure: N(x) = {x} plus every xi with s(xi, x) = 0.
inline FiniteTopology topology_from_structure(const StructureBase& b) {
  const std::size_t n = b.size();
  std::vector<PointSet> nb(n);
  for (std::size_t x = 0; x < n; ++x) {
    nb[x] = b.zero().row(x);
    nb[x].insert(x);
  }
  return FiniteTopology::from_neighborhoods(std::move(nb));
}

}  // namespace wlip

#endif  // WLIP_INDUCED_TOPOLOGY_HPP_
