#ifndef WLIP_GENERATORS_HPP_
#define WLIP_GENERATORS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/metric.hpp"
#include "wlip/structures.hpp"
#include "wlip/topology.hpp"

namespace wlip {

/// Seeded source of small random choices. Equal seeds give equal streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(seed ^ mix(stream + 0x51ed270b27U))) {}

  /// Uniform in [lo, hi].
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  bool chance(unsigned num, unsigned den) { return uniform(0, den - 1) < num; }
  std::uint64_t next() { return engine_(); }

  /// Non-negative rational with small numerator and denominator.
  Rational weight(std::size_t max_num = 4) {
    const auto num = static_cast<std::int64_t>(uniform(0, max_num));
    const auto den = chance(1, 4) ? static_cast<std::int64_t>(uniform(1, 3)) : 1;
    return Rational(num, den);
  }

  PointSet subset(std::size_t n) { return PointSet(next() & PointSet::full(n).bits()); }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15U;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9U;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebU;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

enum class MetricGenMode { per, repair };

inline constexpr std::size_t kMaxResample = 1000;

namespace detail {

/// 0 on zero, c(u) + c(v) + offset elsewhere. c must be constant on the
/// classes of zero; zero must be a partial equivalence relation.
inline Matrix per_form_matrix(const Relation& zero, const std::vector<Rational>& c, const Rational& offset) {
  const std::size_t n = zero.carrier_size();
  Matrix m(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m(u, v) = zero.contains(u, v) ? ExtValue(0) : ExtValue(c[u] + c[v] + offset);
  return m;
}

/// Random PER: `reflexive` points split into random classes.
inline Relation random_per(std::size_t n, PointSet reflexive, Rng& rng) {
  const std::size_t k = std::max<std::size_t>(reflexive.size(), 1);
  std::vector<std::size_t> label(n, 0);
  for (auto x : reflexive.elements()) label[x] = rng.uniform(0, k - 1);
  Relation z(n);
  for (auto a : reflexive.elements())
    for (auto b : reflexive.elements())
      if (label[a] == label[b]) z.insert(a, b);
  return z;
}

/// Weights constant on every class of z.
inline std::vector<Rational> class_weights(const Relation& z, Rng& rng) {
  const std::size_t n = z.carrier_size();
  std::vector<Rational> c(n);
  std::vector<bool> done(n, false);
  for (std::size_t u = 0; u < n; ++u) {
    if (done[u]) continue;
    const Rational w = rng.weight();
    const PointSet cls = z.contains(u, u) ? z.row(u) : PointSet::single(u);
    for (auto v : cls.elements()) {
      c[v] = w;
      done[v] = true;
    }
  }
  return c;
}

inline WeakPseudoMetric gen_per_metric(std::size_t n, Rng& rng, bool pseudo) {
  PointSet reflexive = pseudo ? PointSet::full(n) : rng.subset(n);
  if (reflexive.empty()) reflexive.insert(rng.uniform(0, n - 1));
  const Relation z = random_per(n, reflexive, rng);
  const auto c = class_weights(z, rng);
  Rational offset = rng.weight(2);
  // Keep some positive value off the zero relation so that Z(d) is exactly z.
  if (offset.is_zero() && rng.chance(1, 2)) offset = Rational(1);
  return WeakPseudoMetric::make(per_form_matrix(z, c, offset));
}

/// Shortest walks of length >= 1, then the smallest diagonal value set to 0.
inline Matrix repair_closure(Matrix m) {
  const std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const ExtValue via = m(i, k) + m(k, j);
        if (via < m(i, j)) m(i, j) = via;
      }
  ExtValue low = m(0, 0);
  for (std::size_t i = 1; i < n; ++i)
    if (m(i, i) < low) low = m(i, i);
  for (std::size_t i = 0; i < n; ++i)
    if (m(i, i) == low) m(i, i) = ExtValue(0);
  return m;
}

inline WeakPseudoMetric gen_repair_metric(std::size_t n, Rng& rng, bool pseudo) {
  for (std::size_t attempt = 0; attempt < kMaxResample; ++attempt) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        const ExtValue v = rng.chance(1, 4) ? ExtValue(0) : ExtValue(rng.weight(5));
        m(i, j) = v;
        m(j, i) = v;
      }
    if (pseudo)
      for (std::size_t i = 0; i < n; ++i) m(i, i) = ExtValue(0);
    m = repair_closure(std::move(m));
    const auto report = pseudo ? validate_pseudo_metric(m) : validate_weak_pm(m);
    if (report.ok()) return WeakPseudoMetric::make(std::move(m));
  }
  throw Error(Errc::gen_exhausted, "no valid metric after " + std::to_string(kMaxResample) + " attempts");
}

}  // namespace detail

inline WeakPseudoMetric gen_weak_pm(std::size_t n, Rng& rng, MetricGenMode mode, bool pseudo = false) {
  require_carrier_size(n);
  return mode == MetricGenMode::per ? detail::gen_per_metric(n, rng, pseudo)
                                    : detail::gen_repair_metric(n, rng, pseudo);
}

/// Deterministic per (n, seed, mode).
inline WeakPseudoMetric gen_weak_pm(std::size_t n, std::uint64_t seed, MetricGenMode mode) {
  Rng rng(seed, static_cast<std::uint64_t>(mode) + 1);
  return gen_weak_pm(n, rng, mode);
}

/// Either generator, chosen at random.
inline WeakPseudoMetric gen_any_metric(std::size_t n, Rng& rng, bool pseudo = false) {
  return gen_weak_pm(n, rng, rng.chance(1, 2) ? MetricGenMode::per : MetricGenMode::repair, pseudo);
}

struct BaseOptions {
  bool pseudo = false;
  bool proper = false;
  std::size_t max_generators = 3;
};

inline StructureBase gen_base(std::size_t n, Rng& rng, BaseOptions opt = {}) {
  for (std::size_t attempt = 0; attempt < 100; ++attempt) {
    std::vector<WeakPseudoMetric> gens;
    const std::size_t k = rng.uniform(1, opt.max_generators);
    for (std::size_t i = 0; i < k; ++i) gens.push_back(gen_any_metric(n, rng, opt.pseudo));
    auto b = StructureBase::make(std::move(gens));
    if (!opt.proper || b.proper()) return b;
  }
  return StructureBase::make({gen_any_metric(n, rng, opt.pseudo)});
}

/// Random member of L(b): a coarsening of Z(s), optionally combined with a
/// multiple of s when b is proper.
inline WeakPseudoMetric gen_member(const StructureBase& b, Rng& rng) {
  const std::size_t n = b.size();
  const Relation& z = b.zero();
  std::vector<PointSet> blocks = z.classes();
  std::vector<bool> reflexive(blocks.size(), true);
  for (std::size_t x = 0; x < n; ++x)
    if (!z.contains(x, x)) {
      blocks.push_back(PointSet::single(x));
      reflexive.push_back(b.kind() == StructureKind::pseudo || rng.chance(1, 3));
    }
  if (std::find(reflexive.begin(), reflexive.end(), true) == reflexive.end()) {
    reflexive[rng.uniform(0, reflexive.size() - 1)] = true;
  }
  // Merge reflexive blocks into random groups.
  std::vector<std::size_t> group(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) group[i] = reflexive[i] ? rng.uniform(0, blocks.size() - 1) : i;
  Relation coarse(n);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!reflexive[i]) continue;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (!reflexive[j] || group[i] != group[j]) continue;
      for (auto u : blocks[i].elements())
        for (auto v : blocks[j].elements()) coarse.insert(u, v);
    }
  }
  const auto c = detail::class_weights(coarse, rng);
  const PreMetricForm d = unchecked_form(detail::per_form_matrix(coarse, c, rng.weight(2)), ValueMode::strict);
  if (!b.proper() || rng.chance(1, 3)) return *WeakPseudoMetric::from_form(d);
  const Rational k = rng.weight(3) + Rational(1, 2);
  const PreMetricForm ks = scale_metric(k, b.envelope());
  return *WeakPseudoMetric::from_form(rng.chance(1, 2) ? sum_metric(d, ks) : sup_metric(d, ks));
}

inline FiniteTopology gen_topology(std::size_t n, Rng& rng) {
  require_carrier_size(n);
  const unsigned density = static_cast<unsigned>(rng.uniform(1, 6));
  Relation r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.chance(density, 12)) r.insert(i, j);
  return from_preorder(preorder_closure(std::move(r)));
}

inline FiniteTopology gen_topology(std::size_t n, std::uint64_t seed) {
  Rng rng(seed, 101);
  return gen_topology(n, rng);
}

inline PointMap gen_map(std::size_t nx, std::size_t ny, Rng& rng) {
  std::vector<std::size_t> table(nx);
  for (auto& t : table) t = rng.uniform(0, ny - 1);
  return PointMap(ny, std::move(table));
}

inline PointMap gen_map(std::size_t nx, std::size_t ny, std::uint64_t seed) {
  Rng rng(seed, 102);
  return gen_map(nx, ny, rng);
}

/// Extended-mode pseudo-metric: finite inside the blocks of a random
/// partition coarser than `together` (each listed set lies in one block),
/// inf across blocks.
inline WeakPseudoMetric gen_block_metric(std::size_t n, Rng& rng, const std::vector<PointSet>& together = {}) {
  std::vector<std::size_t> label(n);
  const std::size_t k = rng.uniform(1, n);
  for (auto& l : label) l = rng.uniform(0, k - 1);
  for (auto s : together) {
    if (s.empty()) continue;
    const std::size_t target = label[s.first()];
    for (auto x : s.elements()) {
      const std::size_t old = label[x];
      for (auto& l : label)
        if (l == old) l = target;
    }
  }
  std::vector<Rational> c(n);
  for (auto& w : c) w = rng.weight(3);
  const Rational offset = rng.weight(2) + Rational(1);
  Matrix m(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) m(u, v) = ExtValue(0);
      else if (label[u] != label[v]) m(u, v) = ExtValue::infinity();
      else m(u, v) = ExtValue(c[u] + c[v] + offset);
    }
  return WeakPseudoMetric::make_pseudo(std::move(m), ValueMode::extended);
}

inline std::vector<PointSet> random_family(std::size_t n, Rng& rng) {
  std::vector<PointSet> fam;
  const std::size_t k = rng.uniform(1, 4);
  for (std::size_t i = 0; i < k; ++i) {
    PointSet s = rng.subset(n);
    if (s.empty() && !rng.chance(1, 8)) s.insert(rng.uniform(0, n - 1));
    if (std::find(fam.begin(), fam.end(), s) == fam.end()) fam.push_back(s);
  }
  return fam;
}

inline std::vector<PointSet> intersection_closure(std::vector<PointSet> fam) {
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t size = fam.size();
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = i + 1; j < size; ++j) {
        const PointSet s = fam[i] & fam[j];
        if (std::find(fam.begin(), fam.end(), s) == fam.end()) {
          fam.push_back(s);
          grew = true;
        }
      }
  }
  return fam;
}

}  // namespace wlip

#endif  // WLIP_GENERATORS_HPP_
