#ifndef WLIP_MODEL_HPP_
#define WLIP_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wlip/error.hpp"
#include "wlip/metric.hpp"
#include "wlip/structures.hpp"
#include "wlip/topology.hpp"

namespace wlip {

struct SpaceDecl {
  std::string name;
  Carrier carrier;

  friend bool operator==(const SpaceDecl&, const SpaceDecl&) = default;
};

struct MetricDecl {
  std::string name;
  std::string space;
  WeakPseudoMetric metric;

  friend bool operator==(const MetricDecl& a, const MetricDecl& b) {
    return a.name == b.name && a.space == b.space && a.metric == b.metric && a.metric.mode() == b.metric.mode();
  }
};

struct BaseDecl {
  std::string name;
  std::string space;
  bool pseudo = false;  ///< declared with the `pseudo` keyword
  std::vector<std::string> metrics;
  StructureBase base;

  friend bool operator==(const BaseDecl& a, const BaseDecl& b) {
    return a.name == b.name && a.space == b.space && a.pseudo == b.pseudo && a.metrics == b.metrics;
  }
};

struct TopologyDecl {
  std::string name;
  std::string space;
  FiniteTopology topology;

  friend bool operator==(const TopologyDecl&, const TopologyDecl&) = default;
};

struct FamilyDecl {
  std::string name;
  std::string space;
  SubsetFamily family;

  friend bool operator==(const FamilyDecl&, const FamilyDecl&) = default;
};

struct MapDecl {
  std::string name;
  std::string from;
  std::string to;
  PointMap map;

  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

/// Named spaces, metrics, bases, topologies, subset families and maps.
/// Every object is validated when it is added.
class Model {
 public:
  void add_space(const std::string& name, Carrier carrier) {
    unique(name, find_space(name), "space");
    spaces_.push_back({name, std::move(carrier)});
  }

  void add_metric(const std::string& name, const std::string& space, WeakPseudoMetric metric) {
    unique(name, find_metric(name), "metric");
    if (metric.size() != space_ref(space).carrier.size()) {
      throw Error(Errc::carrier_mismatch, "metric " + name + ": size does not match space " + space);
    }
    metrics_.push_back({name, space, std::move(metric)});
  }

  void add_base(const std::string& name, const std::string& space, std::vector<std::string> metrics,
                bool pseudo = false) {
    unique(name, find_base(name), "base");
    space_ref(space);
    std::vector<WeakPseudoMetric> gens;
    for (const auto& m : metrics) {
      const MetricDecl& d = metric_ref(m);
      if (d.space != space) throw Error(Errc::carrier_mismatch, "base " + name + ": metric " + m + " is not on " + space);
      if (pseudo && !d.metric.is_pseudo()) {
        throw Error(Errc::kind_mismatch, "base " + name + ": metric " + m + " is not a pseudo-metric");
      }
      gens.push_back(d.metric);
    }
    try {
      bases_.push_back({name, space, pseudo, std::move(metrics), StructureBase::make(std::move(gens))});
    } catch (const Error& e) {
      throw Error(e.code(), "base " + name + ": " + e.message());
    }
  }

  void add_topology(const std::string& name, const std::string& space, FiniteTopology t) {
    unique(name, find_topology(name), "topology");
    if (t.size() != space_ref(space).carrier.size()) {
      throw Error(Errc::carrier_mismatch, "topology " + name + ": size does not match space " + space);
    }
    topologies_.push_back({name, space, std::move(t)});
  }

  void add_family(const std::string& name, const std::string& space, SubsetFamily f) {
    unique(name, find_family(name), "family");
    if (f.size() != space_ref(space).carrier.size()) {
      throw Error(Errc::carrier_mismatch, "family " + name + ": size does not match space " + space);
    }
    families_.push_back({name, space, std::move(f)});
  }

  void add_map(const std::string& name, const std::string& from, const std::string& to, PointMap f) {
    unique(name, find_map(name), "map");
    if (f.source_size() != space_ref(from).carrier.size() || f.target_size() != space_ref(to).carrier.size()) {
      throw Error(Errc::carrier_mismatch, "map " + name + ": sizes do not match " + from + " -> " + to);
    }
    maps_.push_back({name, from, to, std::move(f)});
  }

  const SpaceDecl* find_space(std::string_view n) const { return find(spaces_, n); }
  const MetricDecl* find_metric(std::string_view n) const { return find(metrics_, n); }
  const BaseDecl* find_base(std::string_view n) const { return find(bases_, n); }
  const TopologyDecl* find_topology(std::string_view n) const { return find(topologies_, n); }
  const FamilyDecl* find_family(std::string_view n) const { return find(families_, n); }
  const MapDecl* find_map(std::string_view n) const { return find(maps_, n); }

  const SpaceDecl& space_ref(std::string_view n) const { return ref(find_space(n), "space", n); }
  const MetricDecl& metric_ref(std::string_view n) const { return ref(find_metric(n), "metric", n); }
  const BaseDecl& base_ref(std::string_view n) const { return ref(find_base(n), "base", n); }
  const TopologyDecl& topology_ref(std::string_view n) const { return ref(find_topology(n), "topology", n); }
  const FamilyDecl& family_ref(std::string_view n) const { return ref(find_family(n), "family", n); }
  const MapDecl& map_ref(std::string_view n) const { return ref(find_map(n), "map", n); }

  const std::vector<SpaceDecl>& spaces() const noexcept { return spaces_; }
  const std::vector<MetricDecl>& metrics() const noexcept { return metrics_; }
  const std::vector<BaseDecl>& bases() const noexcept { return bases_; }
  const std::vector<TopologyDecl>& topologies() const noexcept { return topologies_; }
  const std::vector<FamilyDecl>& families() const noexcept { return families_; }
  const std::vector<MapDecl>& maps() const noexcept { return maps_; }

  friend bool operator==(const Model&, const Model&) = default;

 private:
  template <class T>
  static const T* find(const std::vector<T>& v, std::string_view n) {
    for (const auto& e : v)
      if (e.name == n) return &e;
    return nullptr;
  }

  template <class T>
  static const T& ref(const T* p, std::string_view kind, std::string_view n) {
    if (!p) throw Error(Errc::validation_error, "unknown " + std::string(kind) + " " + std::string(n));
    return *p;
  }

  template <class T>
  static void unique(const std::string& name, const T* existing, std::string_view kind) {
    if (existing) throw Error(Errc::validation_error, "duplicate " + std::string(kind) + " " + name);
  }

  std::vector<SpaceDecl> spaces_;
  std::vector<MetricDecl> metrics_;
  std::vector<BaseDecl> bases_;
  std::vector<TopologyDecl> topologies_;
  std::vector<FamilyDecl> families_;
  std::vector<MapDecl> maps_;
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct SourceLine {
  std::size_t number;  // 1-based
  std::vector<Token> tokens;
};

inline std::vector<SourceLine> tokenize(std::string_view text) {
  std::vector<SourceLine> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    SourceLine sl{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
      sl.tokens.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    if (!sl.tokens.empty()) out.push_back(std::move(sl));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

class ModelParser {
 public:
  explicit ModelParser(std::string_view text) : lines_(tokenize(text)) {}

  Model parse() {
    while (at_ < lines_.size()) {
      const SourceLine& l = lines_[at_++];
      const std::string& kw = l.tokens[0].text;
      if (kw == "space") parse_space(l);
      else if (kw == "metric") parse_metric(l);
      else if (kw == "base") parse_base(l);
      else if (kw == "topology") parse_topology(l);
      else if (kw == "family") parse_family(l);
      else if (kw == "map") parse_map(l);
      else fail(l, 0, "unknown declaration '" + kw + "'");
    }
    return std::move(model_);
  }

 private:
  [[noreturn]] static void fail(const SourceLine& l, std::size_t tok, const std::string& msg) {
    const std::size_t col = tok < l.tokens.size() ? l.tokens[tok].column
                                                  : (l.tokens.back().column + l.tokens.back().text.size());
    throw ParseError(l.number, col, msg);
  }

  static void expect_count(const SourceLine& l, std::size_t lo, std::size_t hi, std::string_view usage) {
    if (l.tokens.size() < lo) fail(l, l.tokens.size(), "expected '" + std::string(usage) + "'");
    if (l.tokens.size() > hi) fail(l, hi, "unexpected token; expected '" + std::string(usage) + "'");
  }

  static void expect_word(const SourceLine& l, std::size_t tok, std::string_view word) {
    if (tok >= l.tokens.size() || l.tokens[tok].text != word) fail(l, tok, "expected '" + std::string(word) + "'");
  }

  static std::size_t index(const SourceLine& l, std::size_t tok, std::size_t bound) {
    const std::string& t = l.tokens[tok].text;
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }) || t.size() > 9) {
      fail(l, tok, "expected a point index, got '" + t + "'");
    }
    const std::size_t v = std::stoul(t);
    if (v >= bound) fail(l, tok, "point index " + t + " out of range");
    return v;
  }

  const SourceLine* peek() const { return at_ < lines_.size() ? &lines_[at_] : nullptr; }

  const SourceLine& next(const SourceLine& after, std::string_view what) {
    if (at_ >= lines_.size()) {
      const std::size_t last = lines_.empty() ? after.number : lines_.back().number;
      throw ParseError(last + 1, 1, "unexpected end of input; expected " + std::string(what));
    }
    return lines_[at_++];
  }

  template <class F>
  void validated(const SourceLine& l, F&& add) {
    try {
      add();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(l.number) + ": " + l.tokens[1].text + ": " + e.message());
    }
  }

  std::size_t space_size(const SourceLine& l, std::size_t tok) const {
    const auto* s = model_.find_space(l.tokens[tok].text);
    if (!s) fail(l, tok, "unknown space '" + l.tokens[tok].text + "'");
    return s->carrier.size();
  }

  void parse_space(const SourceLine& l) {
    expect_count(l, 2, 2, "space NAME");
    const SourceLine& p = next(l, "'points N'");
    expect_word(p, 0, "points");
    expect_count(p, 2, 2, "points N");
    const std::string& t = p.tokens[1].text;
    if (t.empty() || t.size() > 4 || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      fail(p, 1, "expected a point count");
    }
    const std::size_t n = std::stoul(t);
    if (n == 0 || n > kMaxPoints) fail(p, 1, "point count must lie in 1.." + std::to_string(kMaxPoints));
    std::vector<std::string> labels;
    if (const auto* nl = peek(); nl && nl->tokens[0].text == "labels") {
      ++at_;
      for (std::size_t i = 1; i < nl->tokens.size(); ++i) labels.push_back(nl->tokens[i].text);
    }
    validated(l, [&] { model_.add_space(l.tokens[1].text, Carrier(n, std::move(labels))); });
  }

  void parse_metric(const SourceLine& l) {
    expect_count(l, 4, 5, "metric NAME of SPACE [extended]");
    expect_word(l, 2, "of");
    const std::size_t n = space_size(l, 3);
    ValueMode mode = ValueMode::strict;
    if (l.tokens.size() == 5) {
      expect_word(l, 4, "extended");
      mode = ValueMode::extended;
    }
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      const SourceLine& row = next(l, "a matrix row");
      if (row.tokens.size() != n) {
        fail(row, std::min(row.tokens.size(), n), "expected " + std::to_string(n) + " entries in the row");
      }
      for (std::size_t j = 0; j < n; ++j) {
        try {
          m(i, j) = ExtValue::parse(row.tokens[j].text);
        } catch (const Error&) {
          fail(row, j, "bad entry '" + row.tokens[j].text + "'");
        }
        if (mode == ValueMode::strict && m(i, j).is_infinite()) {
          throw Error(Errc::ext_value_in_strict_mode, "line " + std::to_string(row.number) + ": metric " +
                                                          l.tokens[1].text + ": inf without 'extended'");
        }
      }
    }
    validated(l, [&] { model_.add_metric(l.tokens[1].text, l.tokens[3].text, WeakPseudoMetric::make(m, mode)); });
  }

  void parse_base(const SourceLine& l) {
    if (l.tokens.size() < 6) fail(l, l.tokens.size(), "expected 'base NAME of SPACE [pseudo] = METRIC ...'");
    expect_word(l, 2, "of");
    space_size(l, 3);
    std::size_t eq = 4;
    bool pseudo = false;
    if (l.tokens[4].text == "pseudo") {
      pseudo = true;
      eq = 5;
    }
    expect_word(l, eq, "=");
    std::vector<std::string> names;
    for (std::size_t i = eq + 1; i < l.tokens.size(); ++i) {
      if (!model_.find_metric(l.tokens[i].text)) fail(l, i, "unknown metric '" + l.tokens[i].text + "'");
      names.push_back(l.tokens[i].text);
    }
    if (names.empty()) fail(l, l.tokens.size(), "a base needs at least one metric");
    validated(l, [&] { model_.add_base(l.tokens[1].text, l.tokens[3].text, std::move(names), pseudo); });
  }

  std::vector<PointSet> set_lines(std::string_view word, std::size_t n) {
    std::vector<PointSet> sets;
    while (const auto* nl = peek()) {
      if (nl->tokens[0].text != word) break;
      ++at_;
      PointSet s;
      for (std::size_t i = 1; i < nl->tokens.size(); ++i) s.insert(index(*nl, i, n));
      sets.push_back(s);
    }
    return sets;
  }

  void parse_topology(const SourceLine& l) {
    expect_count(l, 4, 4, "topology NAME of SPACE");
    expect_word(l, 2, "of");
    const std::size_t n = space_size(l, 3);
    auto opens = set_lines("open", n);
    validated(l, [&] {
      if (n > kMaxExplicitTopologyPoints) {
        throw Error(Errc::too_many_points, "topologies are limited to " +
                                               std::to_string(kMaxExplicitTopologyPoints) + " points");
      }
      opens.push_back(PointSet());
      opens.push_back(PointSet::full(n));
      model_.add_topology(l.tokens[1].text, l.tokens[3].text, FiniteTopology::from_opens(n, opens));
    });
  }

  void parse_family(const SourceLine& l) {
    expect_count(l, 4, 4, "family NAME of SPACE");
    expect_word(l, 2, "of");
    const std::size_t n = space_size(l, 3);
    auto sets = set_lines("set", n);
    validated(l, [&] { model_.add_family(l.tokens[1].text, l.tokens[3].text, SubsetFamily(n, std::move(sets))); });
  }

  void parse_map(const SourceLine& l) {
    expect_count(l, 6, 6, "map NAME : SPACE -> SPACE");
    expect_word(l, 2, ":");
    expect_word(l, 4, "->");
    const std::size_t nx = space_size(l, 3);
    const std::size_t ny = space_size(l, 5);
    const SourceLine& row = next(l, "a row of map targets");
    if (row.tokens.size() != nx) {
      fail(row, std::min(row.tokens.size(), nx), "expected " + std::to_string(nx) + " map targets");
    }
    std::vector<std::size_t> table;
    for (std::size_t i = 0; i < nx; ++i) table.push_back(index(row, i, ny));
    validated(l, [&] { model_.add_map(l.tokens[1].text, l.tokens[3].text, l.tokens[5].text, PointMap(ny, table)); });
  }

  std::vector<SourceLine> lines_;
  std::size_t at_ = 0;
  Model model_;
};

inline std::string render_set_line(std::string_view word, PointSet s) {
  std::string line(word);
  for (auto x : s.elements()) line += " " + std::to_string(x);
  return line;
}

}  // namespace detail

/// Parses the line-oriented model format. Throws ParseError with line and
/// column on syntax errors, and Error (VALIDATION_ERROR and friends) naming
/// the object when a declared object fails its validator.
inline Model parse_model(std::string_view text) { return detail::ModelParser(text).parse(); }

/// Canonical text for a model; parse_model(render_model(m)) == m.
inline std::string render_model(const Model& m) {
  std::ostringstream out;
  bool first = true;
  const auto gap = [&] {
    if (!first) out << '\n';
    first = false;
  };
  for (const auto& s : m.spaces()) {
    gap();
    out << "space " << s.name << "\npoints " << s.carrier.size() << '\n';
    if (!s.carrier.labels().empty()) {
      out << "labels";
      for (const auto& l : s.carrier.labels()) out << ' ' << l;
      out << '\n';
    }
  }
  for (const auto& d : m.metrics()) {
    gap();
    out << "metric " << d.name << " of " << d.space << (d.metric.mode() == ValueMode::extended ? " extended" : "")
        << '\n';
    for (std::size_t i = 0; i < d.metric.size(); ++i) {
      for (std::size_t j = 0; j < d.metric.size(); ++j) out << (j ? " " : "") << d.metric(i, j).to_string();
      out << '\n';
    }
  }
  for (const auto& b : m.bases()) {
    gap();
    out << "base " << b.name << " of " << b.space << (b.pseudo ? " pseudo" : "") << " =";
    for (const auto& g : b.metrics) out << ' ' << g;
    out << '\n';
  }
  for (const auto& t : m.topologies()) {
    gap();
    out << "topology " << t.name << " of " << t.space << '\n';
    const PointSet all = PointSet::full(t.topology.size());
    for (auto u : t.topology.opens())
      if (!u.empty() && u != all) out << detail::render_set_line("open", u) << '\n';
  }
  for (const auto& f : m.families()) {
    gap();
    out << "family " << f.name << " of " << f.space << '\n';
    for (auto s : f.family.members()) out << detail::render_set_line("set", s) << '\n';
  }
  for (const auto& f : m.maps()) {
    gap();
    out << "map " << f.name << " : " << f.from << " -> " << f.to << '\n';
    for (std::size_t i = 0; i < f.map.source_size(); ++i) out << (i ? " " : "") << f.map(i);
    out << '\n';
  }
  return out.str();
}

}  // namespace wlip

#endif  // WLIP_MODEL_HPP_
