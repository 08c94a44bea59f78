#ifndef WLIP_REPORT_HPP_
#define WLIP_REPORT_HPP_

#include <string>
#include <string_view>

#include "json.hpp"
#include "wlip/laws.hpp"
#include "wlip/maps.hpp"

namespace wlip {

/// Flat key/value report; keys keep insertion order.
using Report = nlohmann::ordered_json;

/// `key=value` lines, or one JSON document with the same keys. Multi-line
/// values render as `key<<EOF`, the text, then `EOF`.
inline std::string render_report(const Report& r, bool json) {
  if (json) return r.dump(2) + "\n";
  std::string out;
  for (const auto& [key, value] : r.items()) {
    std::string text;
    if (value.is_string()) text = value.get<std::string>();
    else text = value.dump();
    if (text.find('\n') != std::string::npos) {
      if (text.back() != '\n') text += '\n';
      out += key + "<<EOF\n" + text + "EOF\n";
    } else {
      out += key + "=" + text + "\n";
    }
  }
  return out;
}

namespace detail {

inline std::string pair_string(PointPair p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

inline void put_map_verdict(Report& r, const std::string& key, const MapVerdict& v) {
  r[key] = v.holds;
  for (std::size_t g = 0; g < v.certificates.size(); ++g) {
    const std::string prefix = key + ".certificate." + std::to_string(g);
    r[prefix + ".alpha"] = v.certificates[g].alpha.to_string();
    r[prefix + ".metric"] = v.certificates[g].dominating.to_string();
  }
  if (v.witness) {
    r[key + ".witness.generator"] = v.witness->generator;
    r[key + ".witness.pair"] = pair_string(v.witness->pair);
  }
}

inline void put_remark(Report& r, const std::string& key, const RemarkVerdict& v) {
  r[key] = v.holds;
  if (v.point) r[key + ".witness.point"] = *v.point;
  if (v.generator) r[key + ".witness.generator"] = *v.generator;
}

}  // namespace detail

inline Report to_report(const ClassificationReport& c, RemarkMode remark) {
  Report r;
  if (c.lipschitz) detail::put_map_verdict(r, "lipschitz", *c.lipschitz);
  else r["lipschitz"] = "n/a";
  detail::put_map_verdict(r, "weak_lipschitz", c.weak_lipschitz);
  r["locally_weak_lipschitz"] = c.locally_weak_lipschitz.holds;
  if (c.locally_weak_lipschitz.point) {
    r["locally_weak_lipschitz.witness.point"] = *c.locally_weak_lipschitz.point;
    r["locally_weak_lipschitz.witness.generator"] = c.locally_weak_lipschitz.witness->generator;
    r["locally_weak_lipschitz.witness.pair"] = detail::pair_string(c.locally_weak_lipschitz.witness->pair);
  }
  r["scalar_weak_lipschitz"] = c.scalar_weak_lipschitz.holds;
  if (c.scalar_weak_lipschitz.witness) {
    r["scalar_weak_lipschitz.witness.pair"] = detail::pair_string(*c.scalar_weak_lipschitz.witness);
  }
  r["continuous_induced"] = c.continuous_induced.holds;
  if (c.continuous_induced.point) r["continuous_induced.witness.point"] = *c.continuous_induced.point;
  if (c.uniformly_continuous) {
    r["uniformly_continuous"] = c.uniformly_continuous->holds;
    if (c.uniformly_continuous->witness) {
      r["uniformly_continuous.witness.pair"] = detail::pair_string(*c.uniformly_continuous->witness);
    }
  } else {
    r["uniformly_continuous"] = "n/a";
  }
  r["remark_mode"] = remark == RemarkMode::strict ? "strict" : "relaxed";
  r["locally_lipschitz_remark"] =
      remark == RemarkMode::strict ? c.remark_strict.holds : c.remark_relaxed.holds;
  detail::put_remark(r, "remark_strict", c.remark_strict);
  detail::put_remark(r, "remark_relaxed", c.remark_relaxed);
  return r;
}

inline Report to_report(const SearchReport& s) {
  Report r;
  r["law"] = s.law;
  r["expected"] = expectation_name(s.expected);
  r["n"] = s.n;
  r["seed"] = s.seed;
  r["trials"] = s.trials;
  r["evaluated"] = s.evaluated;
  r["vacuous"] = s.vacuous;
  r["found"] = s.found();
  r["expectation_met"] = s.expectation_met();
  if (s.found_index) {
    r["index"] = *s.found_index;
    r["instance_seed"] = s.seed + *s.found_index;
    r["clause"] = s.clause;
    r["counterexample"] = s.counterexample;
    r["shrunk"] = s.shrunk;
  }
  return r;
}

inline Report to_report(std::string_view id, const LawVerdict& v) {
  Report r;
  const LawInfo& law = law_info(id);
  r["law"] = std::string(law.id);
  r["expected"] = expectation_name(law.expected);
  r["outcome"] = outcome_name(v.outcome);
  if (!v.clause.empty()) r["clause"] = v.clause;
  return r;
}

inline Report catalog_report() {
  Report r;
  for (const auto& l : law_catalog()) {
    const std::string id(l.id);
    r[id + ".expected"] = expectation_name(l.expected);
    r[id + ".statement"] = std::string(l.statement);
  }
  return r;
}

}  // namespace wlip

#endif  // WLIP_REPORT_HPP_
