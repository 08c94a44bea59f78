#ifndef WLIP_POINT_SET_HPP_
#define WLIP_POINT_SET_HPP_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "wlip/error.hpp"

namespace wlip {

/// Largest carrier a point set (and hence any relation) can index.
inline constexpr std::size_t kMaxPoints = 64;

inline void require_carrier_size(std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_argument, "carrier must have at least one point");
  if (n > kMaxPoints) {
    throw Error(Errc::too_many_points, "carrier of " + std::to_string(n) + " points exceeds " +
                                           std::to_string(kMaxPoints));
  }
}

/// Subset of {0, ..., 63} as a bit mask.
class PointSet {
 public:
  constexpr PointSet() = default;
  constexpr explicit PointSet(std::uint64_t bits) : bits_(bits) {}
  PointSet(std::initializer_list<std::size_t> points) {
    for (auto p : points) insert(p);
  }

  static constexpr PointSet full(std::size_t n) {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr PointSet single(std::size_t p) { return PointSet(std::uint64_t{1} << p); }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool contains(std::size_t p) const noexcept { return (bits_ >> p) & 1U; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool subset_of(PointSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(PointSet o) const noexcept { return (bits_ & o.bits_) != 0; }

  void insert(std::size_t p) { bits_ |= std::uint64_t{1} << p; }
  void erase(std::size_t p) { bits_ &= ~(std::uint64_t{1} << p); }

  friend constexpr PointSet operator|(PointSet a, PointSet b) noexcept { return PointSet(a.bits_ | b.bits_); }
  friend constexpr PointSet operator&(PointSet a, PointSet b) noexcept { return PointSet(a.bits_ & b.bits_); }
  friend constexpr PointSet operator-(PointSet a, PointSet b) noexcept { return PointSet(a.bits_ & ~b.bits_); }
  PointSet& operator|=(PointSet o) noexcept {
    bits_ |= o.bits_;
    return *this;
  }
  PointSet& operator&=(PointSet o) noexcept {
    bits_ &= o.bits_;
    return *this;
  }

  friend constexpr bool operator==(PointSet, PointSet) noexcept = default;
  friend constexpr auto operator<=>(PointSet a, PointSet b) noexcept { return a.bits_ <=> b.bits_; }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  /// Lowest element; undefined on the empty set.
  std::size_t first() const noexcept { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  std::string to_string() const {
    std::string s = "{";
    bool first_elem = true;
    for (auto p : elements()) {
      if (!first_elem) s += ",";
      s += std::to_string(p);
      first_elem = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t bits_ = 0;
};

using PointPair = std::pair<std::size_t, std::size_t>;

/// Binary relation on an n-point carrier stored as n row masks.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), rows_(n) { require_carrier_size(n); }

  static Relation full(std::size_t n) {
    Relation r(n);
    for (auto& row : r.rows_) row = PointSet::full(n);
    return r;
  }
  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.rows_[i] = PointSet::single(i);
    return r;
  }

  std::size_t carrier_size() const noexcept { return n_; }
  bool contains(std::size_t i, std::size_t j) const noexcept { return rows_[i].contains(j); }
  void insert(std::size_t i, std::size_t j) { rows_[i].insert(j); }
  PointSet row(std::size_t i) const noexcept { return rows_[i]; }

  std::size_t pair_count() const noexcept {
    std::size_t c = 0;
    for (auto r : rows_) c += r.size();
    return c;
  }
  bool empty() const noexcept { return pair_count() == 0; }

  std::vector<PointPair> pairs() const {
    std::vector<PointPair> out;
    for (std::size_t i = 0; i < n_; ++i)
      for (auto j : rows_[i].elements()) out.emplace_back(i, j);
    return out;
  }

  /// Points x with (x, x) in the relation.
  PointSet reflexive_points() const noexcept {
    PointSet s;
    for (std::size_t i = 0; i < n_; ++i)
      if (rows_[i].contains(i)) s.insert(i);
    return s;
  }

  bool is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (auto j : rows_[i].elements())
        if (!rows_[j].contains(i)) return false;
    return true;
  }

  bool is_transitive() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (auto j : rows_[i].elements())
        if (!rows_[j].subset_of(rows_[i])) return false;
    return true;
  }

  /// Equivalence classes of a partial equivalence relation (reflexive points only).
  std::vector<PointSet> classes() const {
    std::vector<PointSet> out;
    PointSet seen;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!rows_[i].contains(i) || seen.contains(i)) continue;
      out.push_back(rows_[i]);
      seen |= rows_[i];
    }
    return out;
  }

  bool subset_of(const Relation& o) const noexcept {
    if (n_ != o.n_) return false;
    for (std::size_t i = 0; i < n_; ++i)
      if (!rows_[i].subset_of(o.rows_[i])) return false;
    return true;
  }

  friend Relation operator&(const Relation& a, const Relation& b) {
    Relation r(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) r.rows_[i] = a.rows_[i] & b.rows_[i];
    return r;
  }
  friend Relation operator|(const Relation& a, const Relation& b) {
    Relation r(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) r.rows_[i] = a.rows_[i] | b.rows_[i];
    return r;
  }

  friend bool operator==(const Relation&, const Relation&) = default;

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto [i, j] : pairs()) {
      if (!first) s += ",";
      s += "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      first = false;
    }
    return s + "}";
  }

 private:
  std::size_t n_ = 0;
  std::vector<PointSet> rows_;
};

}  // namespace wlip

#endif  // WLIP_POINT_SET_HPP_
