#ifndef WLIP_MAPS_HPP_
#define WLIP_MAPS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/induced_topology.hpp"
#include "wlip/metric.hpp"
#include "wlip/structures.hpp"
#include "wlip/topology.hpp"
#include "wlip/uniformity.hpp"

namespace wlip {

/// Real-valued function on a finite carrier.
struct ScalarMap {
  std::vector<Rational> values;

  friend bool operator==(const ScalarMap&, const ScalarMap&) = default;
};

struct DominationCertificate {
  WeakPseudoMetric dominating;  ///< member of the source structure
  Rational alpha;               ///< dominating == alpha * s_X when the source base is proper, 1 otherwise
};

struct MapWitness {
  std::size_t generator = 0;  ///< index into the target base
  PointPair pair;             ///< source pair where no member can dominate the pullback
};

struct MapVerdict {
  bool holds = false;
  /// One per generator of the target base, in order, when `holds`.
  std::vector<DominationCertificate> certificates;
  std::optional<MapWitness> witness;
};

namespace detail {

inline void check_map_carriers(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  if (f.source_size() != bx.size() || f.target_size() != by.size()) {
    throw Error(Errc::carrier_mismatch, "map does not match the bases' carriers");
  }
}

inline std::vector<PreMetricForm> pullbacks(const PointMap& f, const StructureBase& by) {
  std::vector<PreMetricForm> out;
  for (const auto& b : by.generators()) out.push_back(pullback_metric(f, b));
  return out;
}

/// 0 on `zero`, `offset` elsewhere. Valid whenever `zero` is a partial
/// equivalence relation with a reflexive point.
inline WeakPseudoMetric per_metric(const Relation& zero, const Rational& offset) {
  const std::size_t n = zero.carrier_size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = zero.contains(i, j) ? ExtValue(0) : ExtValue(offset);
  return WeakPseudoMetric::make(std::move(m));
}

/// A member of L(bx) that dominates `p` on the pairs of `on`, or nullopt
/// with the offending pair in `why`.
inline std::optional<DominationCertificate> dominate_on(const StructureBase& bx, const PreMetricForm& p,
                                                        const Relation& on, PointPair& why) {
  const Relation& z = bx.zero();
  const auto pairs = on.pairs();
  for (auto [u, v] : pairs)
    if (z.contains(u, v) && !p(u, v).is_zero()) {
      why = {u, v};
      return std::nullopt;
    }

  std::optional<DominationCertificate> cert;
  if (bx.proper()) {
    const Rational alpha = domination_ratio(p, bx.envelope(), pairs).value_or(Rational(1));
    cert = DominationCertificate{*WeakPseudoMetric::from_form(scale_metric(alpha, bx.envelope())), alpha};
  } else {
    // Z(s_X) is empty; vanish at one diagonal point where p may be exceeded.
    std::optional<std::size_t> anchor;
    for (std::size_t x0 = 0; x0 < bx.size() && !anchor; ++x0)
      if (!on.contains(x0, x0) || p(x0, x0).is_zero()) anchor = x0;
    if (!anchor) {
      why = {0, 0};
      return std::nullopt;
    }
    Rational top(1);
    for (auto [u, v] : pairs)
      if (p(u, v).value() > top) top = p(u, v).value();
    Relation zero = z;
    zero.insert(*anchor, *anchor);
    cert = DominationCertificate{per_metric(zero, top), Rational(1)};
  }

  if (!is_member(cert->dominating, bx).member) throw std::logic_error("domination certificate is not a member");
  for (auto [u, v] : pairs)
    if (p(u, v) > cert->dominating(u, v)) throw std::logic_error("domination certificate does not dominate");
  return cert;
}

}  // namespace detail

/// Every generator b of BY has b o f dominated by some member of L(BX).
inline MapVerdict is_weak_lipschitz(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  detail::check_map_carriers(f, bx, by);
  const auto ps = detail::pullbacks(f, by);
  const Relation all = Relation::full(bx.size());
  MapVerdict v;
  for (std::size_t g = 0; g < ps.size(); ++g) {
    PointPair why;
    auto cert = detail::dominate_on(bx, ps[g], all, why);
    if (!cert) {
      v.certificates.clear();
      v.witness = MapWitness{g, why};
      return v;
    }
    v.certificates.push_back(std::move(*cert));
  }
  v.holds = true;
  return v;
}

/// Same decision for pseudo-metric bases on both sides.
inline MapVerdict is_lipschitz(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  if (bx.kind() != StructureKind::pseudo || by.kind() != StructureKind::pseudo) {
    throw Error(Errc::kind_mismatch, "Lipschitz maps need pseudo-metric bases");
  }
  return is_weak_lipschitz(f, bx, by);
}

/// Minimal member of L(BX) dominating b o f (alpha * s_X for proper BX).
inline DominationCertificate lipschitz_witness(const PointMap& f, const StructureBase& bx, const WeakPseudoMetric& b) {
  if (f.source_size() != bx.size() || f.target_size() != b.size()) {
    throw Error(Errc::carrier_mismatch, "map does not match the carriers");
  }
  PointPair why;
  auto cert = detail::dominate_on(bx, pullback_metric(f, b), Relation::full(bx.size()), why);
  if (!cert) {
    throw Error(Errc::not_dominated, "pullback is positive at (" + std::to_string(why.first) + "," +
                                         std::to_string(why.second) + ") where every member vanishes");
  }
  return *cert;
}

struct LocalVerdict {
  bool holds = true;
  std::optional<std::size_t> point;
  std::optional<MapWitness> witness;
};

/// Domination restricted to N(x) x N(x) at every x, N taken in the topology
/// induced by L(BX). Any neighbourhood contains N(x), and fewer pairs only
/// weaken the requirement, so N(x) is the best choice.
inline LocalVerdict is_locally_weak_lipschitz(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  detail::check_map_carriers(f, bx, by);
  const auto tau = topology_from_structure(bx);
  const auto ps = detail::pullbacks(f, by);
  for (std::size_t x = 0; x < bx.size(); ++x) {
    Relation on(bx.size());
    const PointSet u = tau.min_neighborhood(x);
    for (auto a : u.elements())
      for (auto b : u.elements()) on.insert(a, b);
    for (std::size_t g = 0; g < ps.size(); ++g) {
      PointPair why;
      if (!detail::dominate_on(bx, ps[g], on, why)) return {false, x, MapWitness{g, why}};
    }
  }
  return {};
}

enum class RemarkMode { strict, relaxed };

struct RemarkVerdict {
  bool holds = true;
  std::optional<std::size_t> point;
  std::optional<std::size_t> generator;
};

/// For each generator b of BY and each x: some member d of L(BX) and some
/// r > d(x, x) give b(f x, f xi) < d(x, xi) (strict) or <= (relaxed) for
/// every xi with d(x, xi) < r. The member tried is a large multiple of s_X
/// (or, for improper BX, a two-valued metric that does not vanish at x),
/// with r just above d(x, x).
inline RemarkVerdict locally_lipschitz_remark_check(const PointMap& f, const StructureBase& bx,
                                                    const StructureBase& by, RemarkMode mode) {
  detail::check_map_carriers(f, bx, by);
  const auto ps = detail::pullbacks(f, by);
  const std::size_t n = bx.size();
  const auto pairs = all_pairs(n);
  for (std::size_t g = 0; g < ps.size(); ++g) {
    const PreMetricForm& p = ps[g];
    Rational top(0);
    for (auto [u, v] : pairs)
      if (p(u, v).value() > top) top = p(u, v).value();
    for (std::size_t x = 0; x < n; ++x) {
      std::optional<WeakPseudoMetric> d;
      if (bx.proper()) {
        Rational alpha(0);
        for (auto [u, v] : pairs)
          if (!bx.envelope()(u, v).is_zero()) {
            const Rational r = p(u, v).value() / bx.envelope()(u, v).value();
            if (r > alpha) alpha = r;
          }
        d = WeakPseudoMetric::from_form(scale_metric(alpha + Rational(1), bx.envelope()));
      } else {
        Relation zero = bx.zero();
        const std::size_t anchor = x == 0 ? 1 : 0;
        zero.insert(anchor, anchor);
        d = detail::per_metric(zero, top + Rational(1));
      }
      if (!is_member(*d, bx).member) throw std::logic_error("remark candidate is not a member");

      const ExtValue centre = (*d)(x, x);
      std::optional<Rational> gap;
      for (std::size_t xi = 0; xi < n; ++xi) {
        const ExtValue& v = (*d)(x, xi);
        if (v > centre) {
          const Rational g2 = v.value() - centre.value();
          if (!gap || g2 < *gap) gap = g2;
        }
      }
      const ExtValue radius(centre.value() + gap.value_or(Rational(1)) / Rational(2));
      for (std::size_t xi = 0; xi < n; ++xi) {
        const ExtValue& dv = (*d)(x, xi);
        if (!(dv < radius)) continue;
        const ExtValue& pv = p(x, xi);
        const bool ok = mode == RemarkMode::strict ? pv < dv : pv <= dv;
        if (!ok) return {false, x, g};
      }
    }
  }
  return {};
}

struct ScalarVerdict {
  bool holds = true;
  std::optional<PointPair> witness;  ///< pair of Z(s_X) that some class-respecting phi separates
};

/// phi o f is weak Lipschitz for every weak Lipschitz phi : Y -> R, where R
/// carries the structure generated by |a - b|. Such phi are exactly the
/// functions constant on Z(s_Y)-related pairs.
inline ScalarVerdict is_scalar_weak_lipschitz(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  detail::check_map_carriers(f, bx, by);
  for (auto [a, b] : bx.zero().pairs())
    if (f(a) != f(b) && !by.zero().contains(f(a), f(b))) return {false, PointPair{a, b}};
  return {};
}

/// Blocks on which a weak Lipschitz phi : Y -> R must be constant: the
/// Z(s_Y) classes, plus a singleton for each point outside every class.
inline std::vector<PointSet> scalar_blocks(const StructureBase& by) {
  std::vector<PointSet> blocks = by.zero().classes();
  const PointSet covered = by.zero().reflexive_points();
  for (std::size_t y = 0; y < by.size(); ++y)
    if (!covered.contains(y)) blocks.push_back(PointSet::single(y));
  return blocks;
}

/// All phi : Y -> {0, 1} constant on each block.
inline std::vector<ScalarMap> scalar_test_functions(const StructureBase& by) {
  const auto blocks = scalar_blocks(by);
  if (blocks.size() > 16) throw Error(Errc::subset_explosion, "too many scalar test functions");
  std::vector<ScalarMap> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << blocks.size()); ++code) {
    ScalarMap phi{std::vector<Rational>(by.size(), Rational(0))};
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if ((code >> b) & 1U)
        for (auto y : blocks[b].elements()) phi.values[y] = Rational(1);
    out.push_back(std::move(phi));
  }
  return out;
}

struct SeparatingWitness {
  WeakPseudoMetric metric;  ///< member of L(B)
  Rational epsilon;
  PointSet ball;  ///< U_{metric, epsilon}(x): contains x, misses xi
};

/// A member d of L(B) and eps with x in U_{d,eps}(x) and xi outside it, or
/// nullopt when s(xi, x) = 0 (every member then vanishes at (xi, x)) or
/// xi = x.
inline std::optional<SeparatingWitness> separating_witness(const StructureBase& b, std::size_t x, std::size_t xi) {
  if (x >= b.size() || xi >= b.size()) throw Error(Errc::invalid_argument, "point out of range");
  const Relation& z = b.zero();
  if (x == xi || z.contains(xi, x)) return std::nullopt;

  const PointSet marked = z.contains(xi, xi) ? z.row(xi) : PointSet::single(xi);
  const std::size_t n = b.size();
  Matrix m(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      m(u, v) = z.contains(u, v) ? ExtValue(0)
                                 : ExtValue(std::int64_t{marked.contains(u)} + std::int64_t{marked.contains(v)});
  SeparatingWitness w{WeakPseudoMetric::make(std::move(m)), Rational(1), PointSet()};
  w.ball = ball(w.metric, x, w.epsilon);
  if (!is_member(w.metric, b).member || !w.ball.contains(x) || w.ball.contains(xi)) {
    throw std::logic_error("separating witness failed to re-validate");
  }
  return w;
}

struct ClassificationReport {
  std::optional<MapVerdict> lipschitz;  ///< only for pseudo-metric bases
  MapVerdict weak_lipschitz;
  LocalVerdict locally_weak_lipschitz;
  RemarkVerdict remark_strict;
  RemarkVerdict remark_relaxed;
  ScalarVerdict scalar_weak_lipschitz;
  ContinuityVerdict continuous_induced;
  std::optional<UcVerdict> uniformly_continuous;  ///< only for proper bases
};

inline ClassificationReport classify(const PointMap& f, const StructureBase& bx, const StructureBase& by) {
  ClassificationReport r;
  r.weak_lipschitz = is_weak_lipschitz(f, bx, by);
  if (bx.kind() == StructureKind::pseudo && by.kind() == StructureKind::pseudo) r.lipschitz = r.weak_lipschitz;
  r.locally_weak_lipschitz = is_locally_weak_lipschitz(f, bx, by);
  r.remark_strict = locally_lipschitz_remark_check(f, bx, by, RemarkMode::strict);
  r.remark_relaxed = locally_lipschitz_remark_check(f, bx, by, RemarkMode::relaxed);
  r.scalar_weak_lipschitz = is_scalar_weak_lipschitz(f, bx, by);
  r.continuous_induced = is_continuous(f, topology_from_structure(bx), topology_from_structure(by));
  if (bx.proper() && by.proper()) {
    r.uniformly_continuous = is_uc_map(f, uniformity_from_structure(bx), uniformity_from_structure(by));
  }
  return r;
}

}  // namespace wlip

#endif  // WLIP_MAPS_HPP_
