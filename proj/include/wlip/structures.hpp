#ifndef WLIP_STRUCTURES_HPP_
#define WLIP_STRUCTURES_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/metric.hpp"
#include "wlip/point_set.hpp"
#include "wlip/topology.hpp"

namespace wlip {

enum class StructureKind { pseudo, weak };

inline std::string_view kind_name(StructureKind k) { return k == StructureKind::pseudo ? "pseudo" : "weak"; }

/// Finite generating family of a structure. The generated structure is the
/// set of weak pseudo-metrics d with d <= alpha * s for some alpha > 0, where s
/// is the envelope (pointwise max of the generators). On a finite carrier
/// that is exactly {d : Z(s) within Z(d)}.
class StructureBase {
 public:
  static StructureBase make(std::vector<WeakPseudoMetric> generators) {
    if (generators.empty()) throw Error(Errc::validation_error, "a base needs at least one generator");
    const std::size_t n = generators.front().size();
    for (const auto& g : generators) {
      if (g.size() != n) throw Error(Errc::carrier_mismatch, "generators on different carriers");
      if (g.matrix().has_infinity()) {
        throw Error(Errc::ext_value_in_strict_mode, "structure generators must be finite-valued");
      }
    }
    return StructureBase(std::move(generators));
  }

  std::size_t size() const noexcept { return envelope_.size(); }
  const std::vector<WeakPseudoMetric>& generators() const noexcept { return generators_; }
  StructureKind kind() const noexcept { return kind_; }
  const PreMetricForm& envelope() const noexcept { return envelope_; }
  const Relation& zero() const noexcept { return zero_; }

  /// The envelope vanishes somewhere on the diagonal.
  bool proper() const noexcept { return !zero_.reflexive_points().empty(); }

 private:
  explicit StructureBase(std::vector<WeakPseudoMetric> generators)
      : generators_(std::move(generators)), envelope_(generators_.front().form()) {
    kind_ = StructureKind::pseudo;
    for (const auto& g : generators_) {
      envelope_ = sup_metric(envelope_, g);
      if (!g.is_pseudo()) kind_ = StructureKind::weak;
    }
    zero_ = zero_relation(envelope_);
  }

  std::vector<WeakPseudoMetric> generators_;
  StructureKind kind_ = StructureKind::weak;
  PreMetricForm envelope_;
  Relation zero_;
};

inline const PreMetricForm& envelope(const StructureBase& b) { return b.envelope(); }

/// Smallest alpha > 0 with d <= alpha * s on `pairs`, or nullopt when d is
/// positive somewhere s vanishes (or infinite where s is finite). Returns 1
/// when every ratio is zero.
inline std::optional<Rational> domination_ratio(const PreMetricForm& d, const PreMetricForm& s,
                                                const std::vector<PointPair>& pairs) {
  Rational alpha(0);
  for (auto [i, j] : pairs) {
    const ExtValue& sv = s(i, j);
    const ExtValue& dv = d(i, j);
    if (sv.is_infinite() || dv.is_zero()) continue;
    if (sv.is_zero() || dv.is_infinite()) return std::nullopt;
    const Rational r = dv.value() / sv.value();
    if (r > alpha) alpha = r;
  }
  return alpha.is_zero() ? Rational(1) : alpha;
}

inline std::vector<PointPair> all_pairs(std::size_t n) {
  std::vector<PointPair> out;
  out.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.emplace_back(i, j);
  return out;
}

/// Pointwise d <= alpha * s.
inline bool dominated_by(const PreMetricForm& d, const Rational& alpha, const PreMetricForm& s) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d(i, j) > s(i, j).scaled(alpha)) return false;
  return true;
}

struct MembershipCertificate {
  bool member = false;
  std::optional<Rational> alpha_star;
  std::optional<PointPair> violating_pair;
};

inline MembershipCertificate is_member(const WeakPseudoMetric& d, const StructureBase& b) {
  if (d.size() != b.size()) throw Error(Errc::carrier_mismatch, "candidate and base on different carriers");
  if (b.kind() == StructureKind::pseudo && !d.is_pseudo()) {
    throw Error(Errc::kind_mismatch, "weak candidate against a pseudo-metric base");
  }
  const PreMetricForm& s = b.envelope();
  MembershipCertificate cert;
  for (std::size_t i = 0; i < d.size() && !cert.violating_pair; ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (!d(i, j).is_zero() && (s(i, j).is_zero() || (d(i, j).is_infinite() && s(i, j).is_finite()))) {
        cert.violating_pair = PointPair{i, j};
        break;
      }
  if (cert.violating_pair) return cert;

  cert.member = true;
  cert.alpha_star = domination_ratio(d, s, all_pairs(d.size()));
  if (!cert.alpha_star || !dominated_by(d, *cert.alpha_star, s)) {
    throw std::logic_error("membership certificate failed to re-validate");
  }
  return cert;
}

struct BaseCriterion {
  bool is_base = true;
  std::optional<PointPair> offending;  ///< generator indices (i, j) whose sup no generator dominates
  /// For every pair (i, j): the dominating generator and its alpha.
  std::vector<std::pair<std::size_t, Rational>> witnesses;
};

/// For every b1, b2 in the family some b and alpha > 0 satisfy b1 v b2 <= alpha b.
inline BaseCriterion is_base_for_structure(std::span<const WeakPseudoMetric> family) {
  if (family.empty()) throw Error(Errc::validation_error, "empty family");
  const std::size_t n = family.front().size();
  for (const auto& f : family)
    if (f.size() != n) throw Error(Errc::carrier_mismatch, "family members on different carriers");
  const auto pairs = all_pairs(n);
  BaseCriterion out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i; j < family.size(); ++j) {
      const PreMetricForm joint = sup_metric(family[i], family[j]);
      std::optional<std::pair<std::size_t, Rational>> found;
      for (std::size_t k = 0; k < family.size() && !found; ++k)
        if (auto alpha = domination_ratio(joint, family[k], pairs)) found = {k, *alpha};
      if (!found) {
        out.is_base = false;
        out.offending = PointPair{i, j};
        return out;
      }
      out.witnesses.push_back(*found);
    }
  }
  return out;
}

struct SupClosureEntry {
  std::vector<std::size_t> members;
  PreMetricForm sup;
  bool weak_pm_valid = false;
};

inline constexpr std::size_t kDefaultSubsetLimit = std::size_t{1} << 16;

/// Sups of all non-empty subsets of size <= cap.
inline std::vector<SupClosureEntry> sup_closure(std::span<const WeakPseudoMetric> family, std::size_t cap,
                                                std::size_t limit = kDefaultSubsetLimit) {
  const std::size_t k = family.size();
  if (k == 0) throw Error(Errc::validation_error, "empty family");
  if (k >= 63 || (std::size_t{1} << k) > limit) {
    throw Error(Errc::subset_explosion, "2^" + std::to_string(k) + " subsets exceed the limit");
  }
  cap = std::min(cap, k);
  std::vector<SupClosureEntry> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    const PointSet chosen(mask);
    if (chosen.size() > cap) continue;
    const auto idx = chosen.elements();
    PreMetricForm s = family[idx.front()].form();
    for (std::size_t t = 1; t < idx.size(); ++t) s = sup_metric(s, family[idx[t]]);
    const bool valid = s.has_diagonal_zero();
    out.push_back({idx, std::move(s), valid});
  }
  return out;
}

/// Both bases generate the same structure.
inline bool structures_equal(const StructureBase& a, const StructureBase& b) {
  if (a.size() != b.size()) throw Error(Errc::carrier_mismatch, "bases on different carriers");
  if (a.kind() != b.kind()) throw Error(Errc::kind_mismatch, "bases of different kinds");
  return a.zero() == b.zero();
}

/// d_A: 0 on A x A, 1 elsewhere.
inline WeakPseudoMetric characteristic_metric(std::size_t n, PointSet a) {
  if (a.empty()) throw Error(Errc::validation_error, "d_A of the empty set vanishes nowhere on the diagonal");
  Matrix m(n, ExtValue(1));
  for (auto i : a.elements())
    for (auto j : a.elements()) m(i, j) = ExtValue(0);
  return WeakPseudoMetric::make(std::move(m));
}

/// One d_A per non-empty open A. The empty open is skipped since d_A would
/// vanish nowhere on the diagonal.
inline StructureBase ptau_base(const FiniteTopology& t) {
  std::vector<WeakPseudoMetric> gens;
  for (auto a : t.opens())
    if (!a.empty()) gens.push_back(characteristic_metric(t.size(), a));
  return StructureBase::make(std::move(gens));
}

/// Non-empty list of arbitrary subsets of the carrier.
class SubsetFamily {
 public:
  SubsetFamily(std::size_t n, std::vector<PointSet> members) : n_(n), members_(std::move(members)) {
    require_carrier_size(n);
    if (members_.empty()) throw Error(Errc::validation_error, "subset family must be non-empty");
    for (auto s : members_)
      if (!s.subset_of(PointSet::full(n))) throw Error(Errc::validation_error, "set leaves the carrier");
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<PointSet>& members() const noexcept { return members_; }

  bool contains(PointSet s) const { return std::find(members_.begin(), members_.end(), s) != members_.end(); }

  bool intersection_closed() const {
    for (auto a : members_)
      for (auto b : members_)
        if (!contains(a & b)) return false;
    return true;
  }

  friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;

 private:
  std::size_t n_;
  std::vector<PointSet> members_;
};

/// Finite on every pair of A x A.
inline bool bounded_on(const PreMetricForm& d, PointSet a) {
  for (auto i : a.elements())
    for (auto j : a.elements())
      if (d(i, j).is_infinite()) return false;
  return true;
}

struct BoundednessVerdict {
  bool value = true;
  /// Strict-mode metric: every entry is finite, so the predicate holds trivially.
  bool vacuous = false;
};

/// Bounded on A x A for some A in the family.
inline BoundednessVerdict in_L1(const PreMetricForm& d, const SubsetFamily& fam) {
  if (d.size() != fam.size()) throw Error(Errc::carrier_mismatch, "metric and family on different carriers");
  if (d.mode() == ValueMode::strict) return {true, true};
  for (auto a : fam.members())
    if (bounded_on(d, a)) return {true, false};
  return {false, false};
}

/// Bounded on A x A for every A in the family.
inline BoundednessVerdict in_L2(const PreMetricForm& d, const SubsetFamily& fam) {
  if (d.size() != fam.size()) throw Error(Errc::carrier_mismatch, "metric and family on different carriers");
  if (d.mode() == ValueMode::strict) return {true, true};
  for (auto a : fam.members())
    if (!bounded_on(d, a)) return {false, false};
  return {true, false};
}

/// Mixed-radix indexing of a product carrier; the first factor is most significant.
class ProductIndex {
 public:
  explicit ProductIndex(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw Error(Errc::empty_factor_list, "product of no factors");
    total_ = 1;
    for (auto s : sizes_) {
      total_ *= s;
      if (total_ > kMaxPoints) throw Error(Errc::too_many_points, "product carrier exceeds " + std::to_string(kMaxPoints));
    }
  }

  std::size_t size() const noexcept { return total_; }
  const std::vector<std::size_t>& factor_sizes() const noexcept { return sizes_; }

  std::size_t index(const std::vector<std::size_t>& tuple) const {
    std::size_t idx = 0;
    for (std::size_t f = 0; f < sizes_.size(); ++f) idx = idx * sizes_[f] + tuple[f];
    return idx;
  }

  std::vector<std::size_t> tuple(std::size_t idx) const {
    std::vector<std::size_t> t(sizes_.size());
    for (std::size_t f = sizes_.size(); f-- > 0;) {
      t[f] = idx % sizes_[f];
      idx /= sizes_[f];
    }
    return t;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::size_t total_ = 1;
};

/// Sum of the factor values on each coordinate pair.
inline PreMetricForm product_form(const std::vector<const PreMetricForm*>& factors) {
  if (factors.empty()) throw Error(Errc::empty_factor_list, "product of no factors");
  std::vector<std::size_t> sizes;
  ValueMode mode = ValueMode::strict;
  for (const auto* f : factors) {
    sizes.push_back(f->size());
    mode = combine(mode, f->mode());
  }
  const ProductIndex idx(sizes);
  Matrix m(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    const auto tp = idx.tuple(p);
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const auto tq = idx.tuple(q);
      ExtValue v;
      for (std::size_t f = 0; f < factors.size(); ++f) v = v + (*factors[f])(tp[f], tq[f]);
      m(p, q) = v;
    }
  }
  return unchecked_form(std::move(m), mode);
}

inline WeakPseudoMetric product_metric(std::span<const WeakPseudoMetric> ds) {
  std::vector<const PreMetricForm*> forms;
  for (const auto& d : ds) forms.push_back(&d.form());
  const PreMetricForm sum = product_form(forms);
  const auto report = validate_weak_pm(sum.matrix(), sum.mode());
  if (!report.ok()) throw std::logic_error("product of weak pseudo-metrics failed validation: " + report.summary());
  return *WeakPseudoMetric::from_form(sum);
}

/// Base of the product structure. When every factor is proper this is the
/// single generator sum_i s_i; otherwise sum_i s_i vanishes nowhere on the
/// diagonal, so the base lists every sum of one generator per factor, which
/// has the same envelope.
inline StructureBase product_base(std::span<const StructureBase> bs) {
  if (bs.empty()) throw Error(Errc::empty_factor_list, "product of no bases");
  const bool all_proper = std::all_of(bs.begin(), bs.end(), [](const StructureBase& b) { return b.proper(); });
  if (all_proper) {
    std::vector<const PreMetricForm*> forms;
    for (const auto& b : bs) forms.push_back(&b.envelope());
    return StructureBase::make({*WeakPseudoMetric::from_form(product_form(forms))});
  }
  std::size_t combos = 1;
  for (const auto& b : bs) {
    combos *= b.generators().size();
    if (combos > kDefaultSubsetLimit) throw Error(Errc::subset_explosion, "too many generator combinations");
  }
  std::vector<WeakPseudoMetric> gens;
  for (std::size_t c = 0; c < combos; ++c) {
    std::vector<const PreMetricForm*> forms;
    std::size_t rest = c;
    for (const auto& b : bs) {
      forms.push_back(&b.generators()[rest % b.generators().size()].form());
      rest /= b.generators().size();
    }
    gens.push_back(*WeakPseudoMetric::from_form(product_form(forms)));
  }
  return StructureBase::make(std::move(gens));
}

}  // namespace wlip

#endif  // WLIP_STRUCTURES_HPP_
