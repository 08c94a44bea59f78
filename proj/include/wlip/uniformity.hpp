#ifndef WLIP_UNIFORMITY_HPP_
#define WLIP_UNIFORMITY_HPP_

#include <optional>
#include <span>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/metric.hpp"
#include "wlip/point_set.hpp"
#include "wlip/structures.hpp"

namespace wlip {

/// Principal filter {S : S contains K} on X x X, stored by its kernel K.
class PrincipalUniformity {
 public:
  /// K must be symmetric, transitive and meet the diagonal.
  static PrincipalUniformity make(Relation kernel) {
    if (!kernel.is_symmetric()) throw Error(Errc::validation_error, "kernel is not symmetric");
    if (!kernel.is_transitive()) throw Error(Errc::validation_error, "kernel is not transitive");
    if (kernel.reflexive_points().empty()) throw Error(Errc::validation_error, "kernel misses the diagonal");
    return PrincipalUniformity(std::move(kernel));
  }

  std::size_t size() const noexcept { return kernel_.carrier_size(); }
  const Relation& kernel() const noexcept { return kernel_; }

  friend bool operator==(const PrincipalUniformity&, const PrincipalUniformity&) = default;

 private:
  explicit PrincipalUniformity(Relation k) : kernel_(std::move(k)) {}

  Relation kernel_;
};

/// Kernel Z(s). Refuses bases whose envelope vanishes nowhere on the diagonal,
/// where the sets {d < eps} need not pairwise intersect.
inline PrincipalUniformity uniformity_from_structure(const StructureBase& b) {
  if (!b.proper()) throw Error(Errc::improper_base, "envelope vanishes nowhere on the diagonal");
  return PrincipalUniformity::make(b.zero());
}

inline bool contains_entourage(const PrincipalUniformity& u, const Relation& s) {
  if (s.carrier_size() != u.size()) throw Error(Errc::carrier_mismatch, "entourage on a different carrier");
  return u.kernel().subset_of(s);
}

struct UcVerdict {
  bool holds = true;
  std::optional<PointPair> witness;  ///< pair of K_X whose image leaves K_Y
};

/// (f x f)(K_X) within K_Y.
inline UcVerdict is_uc_map(const PointMap& f, const PrincipalUniformity& ux, const PrincipalUniformity& uy) {
  if (f.source_size() != ux.size() || f.target_size() != uy.size()) {
    throw Error(Errc::carrier_mismatch, "map does not match the uniformities' carriers");
  }
  for (auto [a, b] : ux.kernel().pairs())
    if (!uy.kernel().contains(f(a), f(b))) return {false, PointPair{a, b}};
  return {};
}

/// {d < eps} is an entourage for every eps > 0, i.e. d vanishes on K.
inline bool is_uc_metric(const PreMetricForm& d, const PrincipalUniformity& u) {
  if (d.size() != u.size()) throw Error(Errc::carrier_mismatch, "metric on a different carrier");
  for (auto [a, b] : u.kernel().pairs())
    if (!d(a, b).is_zero()) return false;
  return true;
}

/// Kernel {((x1,y1),(x2,y2)) : (x1,x2) in K_X and (y1,y2) in K_Y}, indexed
/// like the product carrier (first factor most significant).
inline PrincipalUniformity product_uniformity(std::span<const PrincipalUniformity> factors) {
  std::vector<std::size_t> sizes;
  for (const auto& u : factors) sizes.push_back(u.size());
  const ProductIndex idx(sizes);
  Relation k(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto tp = idx.tuple(p);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const auto tq = idx.tuple(q);
      bool in = true;
      for (std::size_t f = 0; f < factors.size() && in; ++f) in = factors[f].kernel().contains(tp[f], tq[f]);
      if (in) k.insert(p, q);
    }
  }
  return PrincipalUniformity::make(std::move(k));
}

inline PrincipalUniformity product_uniformity(const PrincipalUniformity& ux, const PrincipalUniformity& uy) {
  const PrincipalUniformity both[] = {ux, uy};
  return product_uniformity(std::span<const PrincipalUniformity>(both));
}

}  // namespace wlip

#endif  // WLIP_UNIFORMITY_HPP_
