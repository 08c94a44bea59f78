#ifndef WLIP_LAWS_HPP_
#define WLIP_LAWS_HPP_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/generators.hpp"
#include "wlip/induced_topology.hpp"
#include "wlip/maps.hpp"
#include "wlip/model.hpp"
#include "wlip/structures.hpp"
#include "wlip/topology.hpp"
#include "wlip/uniformity.hpp"

namespace wlip {

enum class Expectation { pass_always, find_expected };

inline std::string_view expectation_name(Expectation e) {
  return e == Expectation::pass_always ? "PASS-ALWAYS" : "FIND-EXPECTED";
}

struct LawInfo {
  std::string_view id;
  std::string_view statement;
  Expectation expected;
  std::size_t min_points = 1;
};

inline const std::vector<LawInfo>& law_catalog() {
  static const std::vector<LawInfo> catalog = {
      {"LAW-TOPDEF", "every topology is the topology defined by the metrics d_A, A open", Expectation::pass_always},
      {"LAW-CONT-WL",
       "a continuous map is weak Lipschitz for the structures generated by the characteristic metrics of the "
       "topologies",
       Expectation::pass_always},
      {"LAW-CONT-WL-DENSE", "LAW-CONT-WL restricted to continuous maps whose image meets every non-empty open",
       Expectation::pass_always},
      {"LAW-WL-CONT", "a weak Lipschitz map is continuous for the induced topologies", Expectation::pass_always},
      {"LAW-LIP-UC", "a Lipschitz map is uniformly continuous for the Lipschitz uniformities",
       Expectation::pass_always},
      {"LAW-WL-UC", "a weak Lipschitz map between proper bases is uniformly continuous for the weak Lipschitz "
                    "uniformities",
       Expectation::pass_always},
      {"LAW-MEMBER-UC",
       "every member of a proper structure is uniformly continuous on X x X; the converse is checked as a "
       "finite-scale artifact property, not a theorem",
       Expectation::pass_always},
      {"LAW-L1-CLOSED",
       "for an intersection-closed family, pseudo-metrics bounded on some member form a Lipschitz structure",
       Expectation::pass_always},
      {"LAW-L2-CLOSED", "pseudo-metrics bounded on every member of a non-empty family form a Lipschitz structure",
       Expectation::pass_always},
      {"LAW-L2-EXIST",
       "existential reading: pseudo-metrics bounded on some member of an arbitrary non-empty family are closed "
       "under sums",
       Expectation::find_expected, 3},
      {"LAW-PROD-PM",
       "sums of factor metrics are weak pseudo-metrics (pseudo-metrics for pseudo factors) on the product; the "
       "product of the kernels is the kernel of the product base",
       Expectation::pass_always},
      {"LAW-BASE-CRIT", "a family is a base of its generated structure iff every b1 v b2 is below some alpha b",
       Expectation::pass_always},
      {"LAW-AXIOM-EQUIV",
       "on bounded-set structures, closure under scaling and max agrees with closure under sums",
       Expectation::pass_always},
      {"DIST-SCALAR-WL", "scalar weak Lipschitz implies weak Lipschitz", Expectation::find_expected},
      {"DIST-FAMILY-VS-STRUCTURE-TOPOLOGY",
       "the topology defined by a base equals the topology defined by its generated structure",
       Expectation::find_expected},
      {"HYP-L1-NEEDS-INTERSECTIONS",
       "pseudo-metrics bounded on some member of a family that is not intersection-closed are closed under sums",
       Expectation::find_expected, 3},
  };
  return catalog;
}

inline const LawInfo& law_info(std::string_view id) {
  for (const auto& l : law_catalog())
    if (l.id == id) return l;
  throw Error(Errc::invalid_argument, "unknown law " + std::string(id));
}

enum class Outcome { pass, vacuous, fail };

inline std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::vacuous: return "vacuous";
    case Outcome::fail: return "fail";
  }
  return "unknown";
}

struct LawVerdict {
  Outcome outcome = Outcome::pass;
  std::string clause;  ///< violated clause when failing, unmet hypothesis when vacuous
};

namespace detail {

inline std::string pair_text(PointPair p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

inline LawVerdict pass() { return {}; }
inline LawVerdict vacuous(std::string why) { return {Outcome::vacuous, std::move(why)}; }
inline LawVerdict fail(std::string why) { return {Outcome::fail, std::move(why)}; }

template <class T>
const T& need(const T* p, std::string_view kind, std::string_view name) {
  if (!p) throw Error(Errc::shape_mismatch, "instance needs " + std::string(kind) + " " + std::string(name));
  return *p;
}

struct Shape {
  const Model& m;
  const FiniteTopology& topology(std::string_view n) const { return need(m.find_topology(n), "topology", n).topology; }
  const StructureBase& base(std::string_view n) const { return need(m.find_base(n), "base", n).base; }
  const WeakPseudoMetric& metric(std::string_view n) const { return need(m.find_metric(n), "metric", n).metric; }
  const SubsetFamily& family(std::string_view n) const { return need(m.find_family(n), "family", n).family; }
  const PointMap& map(std::string_view n) const { return need(m.find_map(n), "map", n).map; }
};

inline void add_base(Model& m, const std::string& name, const std::string& space, const StructureBase& b,
                     const std::string& prefix) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < b.generators().size(); ++i) {
    names.push_back(prefix + std::to_string(i));
    m.add_metric(names.back(), space, b.generators()[i]);
  }
  m.add_base(name, space, std::move(names), b.kind() == StructureKind::pseudo);
}

inline std::string witness_text(const MapVerdict& v) {
  if (!v.witness) return "";
  return " (generator " + std::to_string(v.witness->generator) + ", pair " + pair_text(v.witness->pair) + ")";
}

/// Every non-empty open meets f(X).
inline bool image_dense(const PointMap& f, const FiniteTopology& ty) {
  const PointSet img = f.image(PointSet::full(f.source_size()));
  for (std::size_t y = 0; y < ty.size(); ++y)
    if (!ty.min_neighborhood(y).intersects(img)) return false;
  return true;
}

inline LawVerdict law_topdef(const Shape& s) {
  const auto& t = s.topology("tX");
  const auto gens = ptau_base(t).generators();
  const auto defined = topology_from_family(gens);
  if (defined == t) return pass();
  return fail("topology defined by the characteristic metrics is " + defined.to_string() + ", expected " +
              t.to_string());
}

inline LawVerdict law_cont_wl(const Shape& s, bool dense_only) {
  const auto& tx = s.topology("tX");
  const auto& ty = s.topology("tY");
  const auto& f = s.map("f");
  if (!is_continuous(f, tx, ty).holds) return vacuous("f is not continuous");
  const bool dense = image_dense(f, ty);
  if (dense_only && !dense) return vacuous("f(X) misses a non-empty open");
  const auto v = is_weak_lipschitz(f, ptau_base(tx), ptau_base(ty));
  if (v.holds) return pass();
  return fail("f is continuous but not weak Lipschitz" + witness_text(v) +
              (dense ? "" : "; f(X) misses a non-empty open of tY"));
}

inline LawVerdict law_wl_cont(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& by = s.base("BY");
  const auto& f = s.map("f");
  if (!is_weak_lipschitz(f, bx, by).holds) return vacuous("f is not weak Lipschitz");
  const auto c = is_continuous(f, topology_from_structure(bx), topology_from_structure(by));
  if (c.holds) return pass();
  return fail("f is weak Lipschitz but not continuous at point " + std::to_string(*c.point));
}

inline LawVerdict law_lip_uc(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& by = s.base("BY");
  const auto& f = s.map("f");
  if (bx.kind() != StructureKind::pseudo || by.kind() != StructureKind::pseudo) {
    return vacuous("bases are not pseudo-metric bases");
  }
  if (!is_lipschitz(f, bx, by).holds) return vacuous("f is not Lipschitz");
  const auto u = is_uc_map(f, uniformity_from_structure(bx), uniformity_from_structure(by));
  if (u.holds) return pass();
  return fail("f is Lipschitz but not uniformly continuous at pair " + pair_text(*u.witness));
}

inline LawVerdict law_wl_uc(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& by = s.base("BY");
  const auto& f = s.map("f");
  if (!bx.proper() || !by.proper()) return vacuous("a base is not proper");
  if (!is_weak_lipschitz(f, bx, by).holds) return vacuous("f is not weak Lipschitz");
  const auto u = is_uc_map(f, uniformity_from_structure(bx), uniformity_from_structure(by));
  if (u.holds) return pass();
  return fail("f is weak Lipschitz but not uniformly continuous at pair " + pair_text(*u.witness));
}

inline LawVerdict law_member_uc(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& d = s.metric("d");
  if (!bx.proper()) return vacuous("BX is not proper");
  if (bx.kind() == StructureKind::pseudo && !d.is_pseudo()) return vacuous("d is not a pseudo-metric");
  const bool member = is_member(d, bx).member;
  const bool uc = is_uc_metric(d, uniformity_from_structure(bx));
  if (member && !uc) return fail("d is a member but not uniformly continuous");
  if (uc && !member) {
    return fail("converse (finite-scale artifact property, not a theorem): d is uniformly continuous but not a "
                "member");
  }
  return pass();
}

using Predicate = BoundednessVerdict (*)(const PreMetricForm&, const SubsetFamily&);

/// Closure clauses for one pair of members: scaling, downward, max, sum.
inline std::string bounded_closure_failure(const PreMetricForm& d1, const PreMetricForm& d2, const SubsetFamily& a,
                                           Predicate in) {
  const auto check = [&](const PreMetricForm& d, const char* what) -> std::string {
    if (!validate_pseudo_metric(d.matrix(), d.mode()).ok()) return std::string(what) + " is not a pseudo-metric";
    if (!in(d, a).value) return std::string(what) + " is not bounded as required";
    return "";
  };
  for (const auto& [d, what] : {std::pair{scale_metric(Rational(3), d1), "3 d1"},
                                std::pair{scale_metric(Rational(1, 2), d1), "d1/2 (below d1)"},
                                std::pair{sup_metric(d1, d2), "d1 v d2"}, std::pair{sum_metric(d1, d2), "d1 + d2"}}) {
    if (auto msg = check(d, what); !msg.empty()) return msg;
  }
  return "";
}

inline LawVerdict law_bounded(const Shape& s, Predicate in, bool need_closed, bool need_open) {
  const auto& a = s.family("A");
  const auto& d1 = s.metric("d1");
  const auto& d2 = s.metric("d2");
  if (need_closed && !a.intersection_closed()) return vacuous("A is not intersection-closed");
  if (need_open && a.intersection_closed()) return vacuous("A is intersection-closed");
  if (!d1.is_pseudo() || !d2.is_pseudo()) return vacuous("d1, d2 are not pseudo-metrics");
  if (!in(d1, a).value || !in(d2, a).value) return vacuous("d1, d2 are not both in the structure");
  if (auto msg = bounded_closure_failure(d1, d2, a, in); !msg.empty()) return fail(msg);
  return pass();
}

inline BoundednessVerdict in_L1_pred(const PreMetricForm& d, const SubsetFamily& a) { return in_L1(d, a); }
inline BoundednessVerdict in_L2_pred(const PreMetricForm& d, const SubsetFamily& a) { return in_L2(d, a); }

inline LawVerdict law_axiom_equiv(const Shape& s) {
  const auto& a = s.family("A");
  const auto& d1 = s.metric("d1");
  const auto& d2 = s.metric("d2");
  if (!d1.is_pseudo() || !d2.is_pseudo()) return vacuous("d1, d2 are not pseudo-metrics");
  bool any = false;
  for (auto [in, name] : {std::pair{&in_L1_pred, "L1(A)"}, std::pair{&in_L2_pred, "L2(A)"}}) {
    if (!in(d1, a).value || !in(d2, a).value) continue;
    any = true;
    const bool scaled = in(scale_metric(Rational(3), d1), a).value && in(scale_metric(Rational(3), d2), a).value;
    const bool sup = in(sup_metric(d1, d2), a).value;
    const bool sum = in(sum_metric(d1, d2), a).value;
    // d1 v d2 <= d1 + d2 <= 2 (d1 v d2), so with the downward clause each side implies the other.
    if ((scaled && sup) != sum) {
      return fail(std::string(name) + ": scaling and max closure " + (scaled && sup ? "hold" : "fail") +
                  " while sum closure " + (sum ? "holds" : "fails"));
    }
  }
  return any ? pass() : vacuous("d1, d2 are members of neither structure");
}

inline LawVerdict law_prod_pm(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& by = s.base("BY");
  for (std::size_t i = 0; i < bx.generators().size(); ++i)
    for (std::size_t j = 0; j < by.generators().size(); ++j) {
      const auto& gx = bx.generators()[i];
      const auto& gy = by.generators()[j];
      const PreMetricForm p = product_form({&gx.form(), &gy.form()});
      const bool pseudo = gx.is_pseudo() && gy.is_pseudo();
      const auto report = pseudo ? validate_pseudo_metric(p.matrix()) : validate_weak_pm(p.matrix());
      if (!report.ok()) {
        return fail("product of generators " + std::to_string(i) + ", " + std::to_string(j) + ": " + report.summary());
      }
    }
  if (bx.proper() && by.proper()) {
    const StructureBase both[] = {bx, by};
    const auto kernel = uniformity_from_structure(product_base(both)).kernel();
    const auto expected = product_uniformity(uniformity_from_structure(bx), uniformity_from_structure(by)).kernel();
    if (!(kernel == expected)) return fail("kernel of the product base differs from the product of the kernels");
  }
  return pass();
}

inline LawVerdict law_base_crit(const Shape& s) {
  const auto& gens = s.base("B").generators();
  const auto crit = is_base_for_structure(gens);
  const auto& env = s.base("B").envelope();
  const auto pairs = all_pairs(env.size());
  bool dominated = false;
  for (const auto& g : gens) dominated = dominated || domination_ratio(env, g, pairs).has_value();
  if (crit.is_base != dominated) {
    return fail(std::string("pairwise criterion says ") + (crit.is_base ? "base" : "not a base") +
                " but the envelope is " + (dominated ? "" : "not ") + "below a multiple of a generator");
  }
  if (crit.is_base) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i; j < gens.size(); ++j, ++w) {
        const auto& [k, alpha] = crit.witnesses[w];
        if (!dominated_by(sup_metric(gens[i], gens[j]), alpha, gens[k])) {
          return fail("witness for generators " + std::to_string(i) + ", " + std::to_string(j) + " does not dominate");
        }
      }
  }
  return pass();
}

inline LawVerdict law_dist_scalar(const Shape& s) {
  const auto& bx = s.base("BX");
  const auto& by = s.base("BY");
  const auto& f = s.map("f");
  if (!is_scalar_weak_lipschitz(f, bx, by).holds) return vacuous("f is not scalar weak Lipschitz");
  const auto v = is_weak_lipschitz(f, bx, by);
  if (v.holds) return pass();
  return fail("f is scalar weak Lipschitz but not weak Lipschitz" + witness_text(v));
}

inline LawVerdict law_dist_family(const Shape& s) {
  const auto& b = s.base("B");
  const auto fam = topology_from_family(b.generators());
  const auto full = topology_from_structure(b);
  if (!fam.coarser_or_equal(full)) throw std::logic_error("family topology is not coarser than the structure's");
  if (fam == full) return pass();
  return fail("topology of the base " + fam.to_string() + " is strictly coarser than that of the structure " +
              full.to_string());
}

}  // namespace detail

/// Evaluates one law on an instance whose objects carry the conventional
/// names (X, Y, tX, tY, BX, BY, B, f, d, d1, d2, A). Throws SHAPE_MISMATCH if
/// a required object is missing.
inline LawVerdict run_law(std::string_view id, const Model& m) {
  const detail::Shape s{m};
  const LawInfo& law = law_info(id);
  const std::string_view k = law.id;
  if (k == "LAW-TOPDEF") return detail::law_topdef(s);
  if (k == "LAW-CONT-WL") return detail::law_cont_wl(s, false);
  if (k == "LAW-CONT-WL-DENSE") return detail::law_cont_wl(s, true);
  if (k == "LAW-WL-CONT") return detail::law_wl_cont(s);
  if (k == "LAW-LIP-UC") return detail::law_lip_uc(s);
  if (k == "LAW-WL-UC") return detail::law_wl_uc(s);
  if (k == "LAW-MEMBER-UC") return detail::law_member_uc(s);
  if (k == "LAW-L1-CLOSED") return detail::law_bounded(s, &detail::in_L1_pred, true, false);
  if (k == "LAW-L2-CLOSED") return detail::law_bounded(s, &detail::in_L2_pred, false, false);
  if (k == "LAW-L2-EXIST") return detail::law_bounded(s, &detail::in_L1_pred, false, false);
  if (k == "LAW-PROD-PM") return detail::law_prod_pm(s);
  if (k == "LAW-BASE-CRIT") return detail::law_base_crit(s);
  if (k == "LAW-AXIOM-EQUIV") return detail::law_axiom_equiv(s);
  if (k == "DIST-SCALAR-WL") return detail::law_dist_scalar(s);
  if (k == "DIST-FAMILY-VS-STRUCTURE-TOPOLOGY") return detail::law_dist_family(s);
  if (k == "HYP-L1-NEEDS-INTERSECTIONS") return detail::law_bounded(s, &detail::in_L1_pred, false, true);
  throw std::logic_error("law without evaluator: " + std::string(k));
}

namespace detail {

inline std::uint64_t law_stream(std::string_view id) {
  std::uint64_t h = 1469598103934665603U;
  for (char c : id) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211U;
  return h;
}

/// Base on X whose envelope vanishes only at (x0, x0), where every pullback
/// vanishes; makes f weak Lipschitz.
inline std::optional<StructureBase> lipschitz_friendly_base(std::size_t nx, const PointMap& f,
                                                            const StructureBase& by, Rng& rng, bool pseudo) {
  if (pseudo) return std::nullopt;
  std::vector<std::size_t> good;
  for (std::size_t x = 0; x < nx; ++x)
    if (by.zero().contains(f(x), f(x))) good.push_back(x);
  if (good.empty()) return std::nullopt;
  const std::size_t x0 = good[rng.uniform(0, good.size() - 1)];
  Relation z(nx);
  z.insert(x0, x0);
  return StructureBase::make({per_metric(z, rng.weight(3) + Rational(1))});
}

inline void two_bases_and_map(Model& m, std::size_t n, Rng& rng, BaseOptions opt) {
  const std::size_t nx = rng.uniform(1, n);
  const std::size_t ny = rng.uniform(1, n);
  m.add_space("X", Carrier(nx));
  m.add_space("Y", Carrier(ny));
  const auto by = gen_base(ny, rng, opt);
  const auto f = gen_map(nx, ny, rng);
  std::optional<StructureBase> bx;
  if (rng.chance(1, 3)) bx = lipschitz_friendly_base(nx, f, by, rng, opt.pseudo);
  if (!bx) bx = gen_base(nx, rng, opt);
  add_base(m, "BX", "X", *bx, "bx");
  add_base(m, "BY", "Y", by, "by");
  m.add_map("f", "X", "Y", f);
}

inline void family_and_metrics(Model& m, std::size_t n, Rng& rng, std::string_view kind) {
  const bool hyp = kind == "HYP-L1-NEEDS-INTERSECTIONS";
  std::vector<PointSet> fam;
  if ((hyp || kind == "LAW-L2-EXIST") && n >= 3 && rng.chance(1, 2)) {
    fam = {PointSet(0b011), PointSet(0b110)};
  } else {
    for (std::size_t attempt = 0; attempt < 100; ++attempt) {
      fam = random_family(n, rng);
      if (kind == "LAW-L1-CLOSED") fam = intersection_closure(std::move(fam));
      if (!hyp || !SubsetFamily(n, fam).intersection_closed()) break;
    }
  }
  m.add_space("X", Carrier(n));
  m.add_family("A", "X", SubsetFamily(n, fam));
  const auto pick = [&]() -> std::vector<PointSet> {
    if (rng.chance(1, 4)) return {};
    if (kind == "LAW-L2-CLOSED") return fam;
    return {fam[rng.uniform(0, fam.size() - 1)]};
  };
  m.add_metric("d1", "X", gen_block_metric(n, rng, pick()));
  m.add_metric("d2", "X", gen_block_metric(n, rng, pick()));
}

}  // namespace detail

/// Deterministic instance for (law, n, seed); carriers have at most n points.
inline Model gen_instance(std::string_view id, std::size_t n, std::uint64_t seed) {
  const LawInfo& law = law_info(id);
  if (n < law.min_points) throw Error(Errc::invalid_argument, std::string(id) + " needs n >= " + std::to_string(law.min_points));
  require_carrier_size(n);
  Rng rng(seed, detail::law_stream(law.id));
  const std::string_view k = law.id;
  Model m;
  if (k == "LAW-TOPDEF") {
    const std::size_t nx = rng.uniform(1, std::min<std::size_t>(n, kMaxExplicitTopologyPoints));
    m.add_space("X", Carrier(nx));
    m.add_topology("tX", "X", gen_topology(nx, rng));
  } else if (k == "LAW-CONT-WL" || k == "LAW-CONT-WL-DENSE") {
    const std::size_t cap = std::min<std::size_t>(n, kMaxExplicitTopologyPoints);
    const std::size_t nx = rng.uniform(1, cap);
    const std::size_t ny = rng.uniform(1, cap);
    std::optional<FiniteTopology> tx, ty;
    for (std::size_t attempt = 0; attempt < 50; ++attempt) {
      tx = gen_topology(nx, rng);
      ty = gen_topology(ny, rng);
      if (ptau_base(*tx).proper() && ptau_base(*ty).proper()) break;
    }
    std::optional<PointMap> f;
    for (std::size_t attempt = 0; attempt < 50 && !f; ++attempt) {
      auto g = gen_map(nx, ny, rng);
      if (is_continuous(g, *tx, *ty).holds && (k == "LAW-CONT-WL" || detail::image_dense(g, *ty))) f = g;
    }
    if (!f) f = PointMap::constant(nx, ny, rng.uniform(0, ny - 1));
    m.add_space("X", Carrier(nx));
    m.add_space("Y", Carrier(ny));
    m.add_topology("tX", "X", *tx);
    m.add_topology("tY", "Y", *ty);
    m.add_map("f", "X", "Y", *f);
  } else if (k == "LAW-WL-CONT" || k == "DIST-SCALAR-WL") {
    detail::two_bases_and_map(m, n, rng, {});
  } else if (k == "LAW-WL-UC") {
    detail::two_bases_and_map(m, n, rng, {.pseudo = false, .proper = true});
  } else if (k == "LAW-LIP-UC") {
    detail::two_bases_and_map(m, n, rng, {.pseudo = true, .proper = true});
  } else if (k == "LAW-MEMBER-UC") {
    const std::size_t nx = rng.uniform(1, n);
    const bool pseudo = rng.chance(1, 3);
    const auto b = gen_base(nx, rng, {.pseudo = pseudo, .proper = true});
    m.add_space("X", Carrier(nx));
    detail::add_base(m, "BX", "X", b, "b");
    m.add_metric("d", "X", rng.chance(1, 2) ? gen_member(b, rng) : gen_any_metric(nx, rng, pseudo));
  } else if (k == "LAW-L1-CLOSED" || k == "LAW-L2-CLOSED" || k == "LAW-L2-EXIST" || k == "LAW-AXIOM-EQUIV" ||
             k == "HYP-L1-NEEDS-INTERSECTIONS") {
    detail::family_and_metrics(m, rng.uniform(law.min_points, n), rng, k);
  } else if (k == "LAW-PROD-PM") {
    const std::size_t nx = rng.uniform(1, n);
    const std::size_t ny = rng.uniform(1, std::min(n, kMaxPoints / nx));
    m.add_space("X", Carrier(nx));
    m.add_space("Y", Carrier(ny));
    detail::add_base(m, "BX", "X", gen_base(nx, rng, {.pseudo = rng.chance(1, 3)}), "bx");
    detail::add_base(m, "BY", "Y", gen_base(ny, rng, {.pseudo = rng.chance(1, 3)}), "by");
  } else if (k == "LAW-BASE-CRIT" || k == "DIST-FAMILY-VS-STRUCTURE-TOPOLOGY") {
    const std::size_t nx = rng.uniform(1, n);
    m.add_space("X", Carrier(nx));
    detail::add_base(m, "B", "X", gen_base(nx, rng, {.max_generators = 4}), "b");
  } else {
    throw std::logic_error("law without generator: " + std::string(k));
  }
  return m;
}

namespace detail {

inline std::size_t drop_index(std::size_t i, std::size_t p) { return i > p ? i - 1 : i; }

inline PointSet drop_point(PointSet s, std::size_t p) {
  PointSet out;
  for (auto x : s.elements())
    if (x != p) out.insert(drop_index(x, p));
  return out;
}

}  // namespace detail

/// The instance with point p removed from `space`, or nullopt when some
/// object does not survive the restriction.
inline std::optional<Model> remove_point(const Model& m, const std::string& space, std::size_t p) {
  using detail::drop_index;
  using detail::drop_point;
  try {
    Model out;
    for (const auto& s : m.spaces()) {
      if (s.name != space) {
        out.add_space(s.name, s.carrier);
        continue;
      }
      const std::size_t n = s.carrier.size();
      if (n <= 1 || p >= n) return std::nullopt;
      auto labels = s.carrier.labels();
      if (!labels.empty()) labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(p));
      out.add_space(s.name, Carrier(n - 1, std::move(labels)));
    }
    for (const auto& d : m.metrics()) {
      if (d.space != space) {
        out.add_metric(d.name, d.space, d.metric);
        continue;
      }
      const std::size_t n = d.metric.size();
      Matrix r(n - 1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != p && j != p) r(drop_index(i, p), drop_index(j, p)) = d.metric(i, j);
      out.add_metric(d.name, d.space, WeakPseudoMetric::make(std::move(r), d.metric.mode()));
    }
    for (const auto& b : m.bases()) out.add_base(b.name, b.space, b.metrics, b.pseudo);
    for (const auto& t : m.topologies()) {
      if (t.space != space) {
        out.add_topology(t.name, t.space, t.topology);
        continue;
      }
      std::vector<PointSet> nb;
      for (std::size_t x = 0; x < t.topology.size(); ++x)
        if (x != p) nb.push_back(drop_point(t.topology.min_neighborhood(x), p));
      out.add_topology(t.name, t.space, FiniteTopology::from_neighborhoods(std::move(nb)));
    }
    for (const auto& f : m.families()) {
      if (f.space != space) {
        out.add_family(f.name, f.space, f.family);
        continue;
      }
      std::vector<PointSet> sets;
      for (auto s : f.family.members()) {
        const PointSet r = drop_point(s, p);
        if (std::find(sets.begin(), sets.end(), r) == sets.end()) sets.push_back(r);
      }
      out.add_family(f.name, f.space, SubsetFamily(f.family.size() - 1, std::move(sets)));
    }
    for (const auto& f : m.maps()) {
      std::vector<std::size_t> table;
      for (std::size_t x = 0; x < f.map.source_size(); ++x) {
        if (f.from == space && x == p) continue;
        std::size_t y = f.map(x);
        if (f.to == space) {
          if (y == p) return std::nullopt;
          y = drop_index(y, p);
        }
        table.push_back(y);
      }
      const std::size_t ny = f.map.target_size() - (f.to == space ? 1 : 0);
      out.add_map(f.name, f.from, f.to, PointMap(ny, std::move(table)));
    }
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Greedy point removal that keeps the law failing.
inline Model shrink(std::string_view id, Model m) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t s = 0; s < m.spaces().size() && !changed; ++s) {
      const std::string name = m.spaces()[s].name;
      for (std::size_t p = 0; p < m.spaces()[s].carrier.size() && !changed; ++p) {
        auto smaller = remove_point(m, name, p);
        if (!smaller) continue;
        LawVerdict v;
        try {
          v = run_law(id, *smaller);
        } catch (const Error&) {
          continue;
        }
        if (v.outcome == Outcome::fail) {
          m = std::move(*smaller);
          changed = true;
        }
      }
    }
  }
  return m;
}

struct SearchReport {
  std::string law;
  Expectation expected = Expectation::pass_always;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t evaluated = 0;  ///< instances up to and including the counterexample
  std::size_t vacuous = 0;    ///< of those, instances whose hypotheses were unmet
  std::optional<std::size_t> found_index;
  std::string clause;
  std::string counterexample;  ///< rendered model
  std::string shrunk;          ///< rendered model after point removal

  bool found() const noexcept { return found_index.has_value(); }
  bool expectation_met() const noexcept { return (expected == Expectation::find_expected) == found(); }
};

/// Runs the law on instances seed, seed + 1, ..., seed + trials - 1 and
/// reports the lowest-index failure. The report does not depend on `workers`.
inline SearchReport search(std::string_view id, std::size_t n, std::uint64_t seed, std::size_t trials,
                           std::size_t workers = 1) {
  const LawInfo& law = law_info(id);
  if (trials == 0) throw Error(Errc::invalid_argument, "trials must be at least 1");
  workers = std::max<std::size_t>(1, std::min(workers, trials));

  std::vector<Outcome> status(trials, Outcome::pass);
  std::vector<std::string> clauses(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{trials};

  const auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= trials || i > best.load()) return;
      try {
        const auto v = run_law(law.id, gen_instance(law.id, n, seed + i));
        status[i] = v.outcome;
        clauses[i] = v.clause;
        if (v.outcome != Outcome::fail) continue;
      } catch (...) {
        errors[i] = std::current_exception();
      }
      std::size_t cur = best.load();
      while (i < cur && !best.compare_exchange_weak(cur, i)) {
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  const std::size_t stop = best.load();
  if (stop < trials && errors[stop]) std::rethrow_exception(errors[stop]);

  SearchReport r;
  r.law = std::string(law.id);
  r.expected = law.expected;
  r.n = n;
  r.seed = seed;
  r.trials = trials;
  r.evaluated = std::min(stop + 1, trials);
  for (std::size_t i = 0; i < r.evaluated; ++i)
    if (status[i] == Outcome::vacuous) ++r.vacuous;
  if (stop < trials) {
    r.found_index = stop;
    r.clause = clauses[stop];
    const Model instance = gen_instance(law.id, n, seed + stop);
    r.counterexample = render_model(instance);
    r.shrunk = render_model(shrink(law.id, instance));
  }
  return r;
}

}  // namespace wlip

#endif  // WLIP_LAWS_HPP_
