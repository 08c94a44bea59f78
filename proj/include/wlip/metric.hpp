#ifndef WLIP_METRIC_HPP_
#define WLIP_METRIC_HPP_

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/point_set.hpp"
#include "wlip/rational.hpp"

namespace wlip {

/// Whether +inf entries are admitted.
enum class ValueMode { strict, extended };

inline ValueMode combine(ValueMode a, ValueMode b) {
  return (a == ValueMode::extended || b == ValueMode::extended) ? ValueMode::extended : ValueMode::strict;
}

/// A finite point set {0, ..., n-1} with optional distinct labels.
class Carrier {
 public:
  explicit Carrier(std::size_t n, std::vector<std::string> labels = {}) : size_(n), labels_(std::move(labels)) {
    require_carrier_size(n);
    if (!labels_.empty()) {
      if (labels_.size() != n) {
        throw Error(Errc::validation_error, "expected " + std::to_string(n) + " labels, got " +
                                                std::to_string(labels_.size()));
      }
      std::set<std::string> seen(labels_.begin(), labels_.end());
      if (seen.size() != labels_.size()) throw Error(Errc::validation_error, "point labels must be distinct");
    }
  }

  std::size_t size() const noexcept { return size_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const Carrier&, const Carrier&) = default;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

/// Total map between finite carriers given by its assignment table.
class PointMap {
 public:
  PointMap(std::size_t target_size, std::vector<std::size_t> table)
      : target_size_(target_size), table_(std::move(table)) {
    require_carrier_size(table_.size());
    require_carrier_size(target_size_);
    for (auto t : table_) {
      if (t >= target_size_) {
        throw Error(Errc::validation_error, "map target " + std::to_string(t) + " out of range");
      }
    }
  }

  static PointMap identity(std::size_t n) {
    std::vector<std::size_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = i;
    return PointMap(n, std::move(t));
  }
  static PointMap constant(std::size_t source_size, std::size_t target_size, std::size_t value) {
    return PointMap(target_size, std::vector<std::size_t>(source_size, value));
  }

  std::size_t source_size() const noexcept { return table_.size(); }
  std::size_t target_size() const noexcept { return target_size_; }
  std::size_t operator()(std::size_t x) const noexcept { return table_[x]; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }

  PointSet image(PointSet s) const {
    PointSet out;
    for (auto x : s.elements()) out.insert(table_[x]);
    return out;
  }
  PointSet preimage(PointSet s) const {
    PointSet out;
    for (std::size_t x = 0; x < table_.size(); ++x)
      if (s.contains(table_[x])) out.insert(x);
    return out;
  }

  friend bool operator==(const PointMap&, const PointMap&) = default;

 private:
  std::size_t target_size_;
  std::vector<std::size_t> table_;
};

/// Unvalidated square matrix of extended values.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, ExtValue fill = ExtValue()) : n_(n), v_(n * n, fill) {}
  Matrix(std::initializer_list<std::initializer_list<ExtValue>> rows) : n_(rows.size()) {
    v_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw Error(Errc::validation_error, "matrix is not square");
      v_.insert(v_.end(), row.begin(), row.end());
    }
  }

  std::size_t size() const noexcept { return n_; }
  const ExtValue& operator()(std::size_t i, std::size_t j) const noexcept { return v_[i * n_ + j]; }
  ExtValue& operator()(std::size_t i, std::size_t j) noexcept { return v_[i * n_ + j]; }

  bool has_infinity() const noexcept {
    return std::any_of(v_.begin(), v_.end(), [](const ExtValue& e) { return e.is_infinite(); });
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < n_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < n_; ++j) s += (j ? "," : "") + (*this)(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t n_ = 0;
  std::vector<ExtValue> v_;
};

struct Violation {
  enum class Kind { asymmetry, triangle, no_diagonal_zero, diagonal_nonzero };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;

  std::string describe() const {
    const auto s = [](std::size_t v) { return std::to_string(v); };
    switch (kind) {
      case Kind::asymmetry: return "asymmetry at (" + s(i) + "," + s(j) + ")";
      case Kind::triangle: return "triangle violated at (" + s(i) + "," + s(j) + "," + s(k) + ")";
      case Kind::no_diagonal_zero: return "no diagonal zero";
      case Kind::diagonal_nonzero: return "diagonal entry v(" + s(i) + "," + s(i) + ") != 0";
    }
    return "unknown";
  }
};

/// Violated clauses; keeps the first `kMaxListed` and counts the rest.
struct ValidationReport {
  static constexpr std::size_t kMaxListed = 10;

  std::vector<Violation> violations;
  std::size_t total = 0;

  bool ok() const noexcept { return total == 0; }

  void add(Violation v) {
    if (violations.size() < kMaxListed) violations.push_back(v);
    ++total;
  }

  bool has(Violation::Kind kind) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
  }

  std::string summary() const {
    if (ok()) return "valid";
    std::string s;
    for (const auto& v : violations) s += (s.empty() ? "" : "; ") + v.describe();
    if (total > violations.size()) s += "; ... (" + std::to_string(total) + " violations)";
    return s;
  }
};

namespace detail {

inline void check_mode(const Matrix& m, ValueMode mode) {
  if (mode == ValueMode::strict && m.has_infinity()) {
    throw Error(Errc::ext_value_in_strict_mode, "inf entry in a strict-mode matrix");
  }
}

inline void check_form_clauses(const Matrix& m, ValidationReport& report) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m(i, j) != m(j, i)) report.add({Violation::Kind::asymmetry, i, j, 0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (m(i, k) > m(i, j) + m(j, k)) report.add({Violation::Kind::triangle, i, j, k});
}

inline bool has_diagonal_zero(const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m(i, i).is_zero()) return true;
  return false;
}

}  // namespace detail

/// Symmetry and triangle clauses only.
inline ValidationReport validate_form(const Matrix& m, ValueMode mode = ValueMode::strict) {
  detail::check_mode(m, mode);
  ValidationReport r;
  detail::check_form_clauses(m, r);
  return r;
}

inline ValidationReport validate_weak_pm(const Matrix& m, ValueMode mode = ValueMode::strict) {
  ValidationReport r = validate_form(m, mode);
  if (!detail::has_diagonal_zero(m)) r.add({Violation::Kind::no_diagonal_zero, 0, 0, 0});
  return r;
}

inline ValidationReport validate_pseudo_metric(const Matrix& m, ValueMode mode = ValueMode::strict) {
  ValidationReport r = validate_weak_pm(m, mode);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!m(i, i).is_zero()) r.add({Violation::Kind::diagonal_nonzero, i, i, 0});
  return r;
}

/// Symmetric matrix satisfying the triangle inequality over all triples,
/// with no requirement on the diagonal.
class PreMetricForm {
 public:
  static PreMetricForm make(Matrix m, ValueMode mode = ValueMode::strict) {
    require_carrier_size(m.size());
    const auto report = validate_form(m, mode);
    if (!report.ok()) throw Error(Errc::validation_error, report.summary());
    return PreMetricForm(std::move(m), mode);
  }

  std::size_t size() const noexcept { return m_.size(); }
  const ExtValue& operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  ValueMode mode() const noexcept { return mode_; }

  bool has_diagonal_zero() const { return detail::has_diagonal_zero(m_); }
  bool is_pseudo() const {
    for (std::size_t i = 0; i < size(); ++i)
      if (!m_(i, i).is_zero()) return false;
    return true;
  }

  friend bool operator==(const PreMetricForm& a, const PreMetricForm& b) { return a.m_ == b.m_; }

  std::string to_string() const { return m_.to_string(); }

 private:
  PreMetricForm(Matrix m, ValueMode mode) : m_(std::move(m)), mode_(mode) {}

  // Operations below preserve symmetry and the triangle inequality by construction.
  friend PreMetricForm unchecked_form(Matrix m, ValueMode mode);

  Matrix m_;
  ValueMode mode_ = ValueMode::strict;
};

inline PreMetricForm unchecked_form(Matrix m, ValueMode mode) { return PreMetricForm(std::move(m), mode); }

/// Form that vanishes at least once on the diagonal.
class WeakPseudoMetric {
 public:
  static WeakPseudoMetric make(Matrix m, ValueMode mode = ValueMode::strict) {
    require_carrier_size(m.size());
    const auto report = validate_weak_pm(m, mode);
    if (!report.ok()) throw Error(Errc::validation_error, report.summary());
    return WeakPseudoMetric(unchecked_form(std::move(m), mode));
  }

  /// Like `make`, but additionally requires every diagonal entry to vanish.
  static WeakPseudoMetric make_pseudo(Matrix m, ValueMode mode = ValueMode::strict) {
    require_carrier_size(m.size());
    const auto report = validate_pseudo_metric(m, mode);
    if (!report.ok()) throw Error(Errc::validation_error, report.summary());
    return WeakPseudoMetric(unchecked_form(std::move(m), mode));
  }

  static std::optional<WeakPseudoMetric> from_form(const PreMetricForm& f) {
    if (!f.has_diagonal_zero()) return std::nullopt;
    return WeakPseudoMetric(f);
  }

  std::size_t size() const noexcept { return form_.size(); }
  const ExtValue& operator()(std::size_t i, std::size_t j) const noexcept { return form_(i, j); }
  const PreMetricForm& form() const noexcept { return form_; }
  operator const PreMetricForm&() const noexcept { return form_; }  // NOLINT(implicit)
  const Matrix& matrix() const noexcept { return form_.matrix(); }
  ValueMode mode() const noexcept { return form_.mode(); }
  bool is_pseudo() const { return form_.is_pseudo(); }

  friend bool operator==(const WeakPseudoMetric& a, const WeakPseudoMetric& b) { return a.form_ == b.form_; }

  std::string to_string() const { return form_.to_string(); }

 private:
  explicit WeakPseudoMetric(PreMetricForm f) : form_(std::move(f)) {}

  PreMetricForm form_;
};

namespace detail {

inline void same_carrier(const PreMetricForm& a, const PreMetricForm& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::carrier_mismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " points");
  }
}

template <typename Fn>
PreMetricForm pointwise(const PreMetricForm& a, const PreMetricForm& b, Fn fn) {
  same_carrier(a, b);
  Matrix m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = fn(a(i, j), b(i, j));
  return unchecked_form(std::move(m), combine(a.mode(), b.mode()));
}

}  // namespace detail

/// Pointwise max. May lose diagonal vanishing.
inline PreMetricForm sup_metric(const PreMetricForm& a, const PreMetricForm& b) {
  return detail::pointwise(a, b, [](const ExtValue& x, const ExtValue& y) { return max(x, y); });
}

/// Pointwise sum. May lose diagonal vanishing.
inline PreMetricForm sum_metric(const PreMetricForm& a, const PreMetricForm& b) {
  return detail::pointwise(a, b, [](const ExtValue& x, const ExtValue& y) { return x + y; });
}

inline PreMetricForm scale_metric(const Rational& alpha, const PreMetricForm& d) {
  if (!alpha.is_positive()) throw Error(Errc::nonpositive_scale, "scale factor " + alpha.to_string());
  Matrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) m(i, j) = d(i, j).scaled(alpha);
  return unchecked_form(std::move(m), d.mode());
}

/// (x1, x2) -> d(f(x1), f(x2)).
inline PreMetricForm pullback_metric(const PointMap& f, const PreMetricForm& d) {
  if (f.target_size() != d.size()) {
    throw Error(Errc::carrier_mismatch, "map target has " + std::to_string(f.target_size()) +
                                            " points, metric has " + std::to_string(d.size()));
  }
  const std::size_t n = f.source_size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(f(i), f(j));
  return unchecked_form(std::move(m), d.mode());
}

/// Pairs where the form vanishes; a partial equivalence relation.
inline Relation zero_relation(const PreMetricForm& d) {
  Relation z(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (d(i, j).is_zero()) z.insert(i, j);
  return z;
}

/// {xi : d(xi, x) < eps}; requires eps > d(x, x).
inline PointSet ball(const PreMetricForm& d, std::size_t x, const Rational& eps) {
  const ExtValue e(eps.is_negative() ? Rational(0) : eps);
  if (eps.is_negative() || !(e > d(x, x))) {
    throw Error(Errc::epsilon_too_small, "eps=" + eps.to_string() + " <= d(x,x)=" + d(x, x).to_string());
  }
  PointSet out;
  for (std::size_t xi = 0; xi < d.size(); ++xi)
    if (d(xi, x) < e) out.insert(xi);
  return out;
}

struct BallEntry {
  ExtValue level;   ///< w: the ball is {xi : d(xi, x) <= w}
  Rational radius;  ///< an eps with {d(., x) < eps} equal to that set
  PointSet set;
};

/// Every distinct ball centred at x, one per finite row value w >= d(x, x).
inline std::vector<BallEntry> ball_family(const PreMetricForm& d, std::size_t x) {
  std::vector<ExtValue> levels;
  for (std::size_t xi = 0; xi < d.size(); ++xi) {
    const ExtValue& v = d(xi, x);
    if (v.is_finite() && v >= d(x, x)) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  Rational gap(1);
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const Rational g = levels[i + 1].value() - levels[i].value();
    if (i == 0 || g < gap) gap = g;
  }

  std::vector<BallEntry> out;
  for (const auto& w : levels) {
    PointSet s;
    for (std::size_t xi = 0; xi < d.size(); ++xi)
      if (d(xi, x) <= w) s.insert(xi);
    out.push_back({w, w.value() + gap / Rational(2), s});
  }
  return out;
}

}  // namespace wlip

#endif  // WLIP_METRIC_HPP_
