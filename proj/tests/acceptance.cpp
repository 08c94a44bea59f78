#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace wlip {
namespace {

struct Outcome_ {
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details.push_back("violated: " + what);
    }
  }
};

using Criterion = std::function<Outcome_()>;

std::string indent(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) out += "      " + line + "\n";
  return out;
}

Outcome_ topologies_from_characteristic_metrics() {
  Outcome_ o;
  const std::size_t expected[] = {0, 1, 4, 29, 355};
  std::size_t total = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::size_t ok = 0;
    const std::size_t count = for_each_topology(n, [&](std::size_t, const FiniteTopology& t) {
      Model m;
      m.add_space("X", Carrier(n));
      m.add_topology("tX", "X", t);
      if (run_law("LAW-TOPDEF", m).outcome == Outcome::pass) ++ok;
      else o.details.push_back("LAW-TOPDEF fails on " + t.to_string());
      return true;
    });
    o.require(count == expected[n], "topology count at n=" + std::to_string(n) + " is " + std::to_string(count));
    o.require(ok == count, "LAW-TOPDEF at n=" + std::to_string(n));
    if (n <= 3) {
      auto brute = testing::brute_force_topologies(n);
      std::vector<std::vector<PointSet>> listed;
      for (const auto& t : enumerate_topologies(n)) listed.push_back(t.opens());
      std::sort(brute.begin(), brute.end());
      std::sort(listed.begin(), listed.end());
      o.require(brute == listed, "enumeration matches brute force at n=" + std::to_string(n));
    }
    total += count;
  }
  o.summary = "topology_from_family(ptau_base(t)) = t for all " + std::to_string(total) +
              " topologies on 1..4 points (counts 1, 4, 29, 355)";
  return o;
}

Outcome_ implication_chain() {
  Outcome_ o;
  std::string parts;
  for (const char* id : {"LAW-CONT-WL", "LAW-WL-CONT", "LAW-LIP-UC", "LAW-WL-UC"}) {
    const auto r = search(id, 5, 0, 10000);
    parts += std::string(parts.empty() ? "" : ", ") + id + " " +
             (r.found() ? "found at index " + std::to_string(*r.found_index) : "none-found") + " (" +
             std::to_string(r.evaluated - r.vacuous) + "/" + std::to_string(r.evaluated) + " non-vacuous)";
    o.require(!r.found(), std::string(id) + " none-found over 10^4 instances");
    if (r.found()) {
      o.details.push_back(std::string(id) + " clause: " + r.clause);
      o.details.push_back(std::string(id) + " shrunk counterexample:\n" + indent(r.shrunk));
    }
  }
  const auto dense = search("LAW-CONT-WL-DENSE", 5, 0, 10000);
  o.details.push_back(std::string("supplementary LAW-CONT-WL-DENSE (continuous maps whose image meets every "
                                  "non-empty open): ") +
                      (dense.found() ? "found at index " + std::to_string(*dense.found_index) : "none-found") +
                      " over 10^4 instances");
  o.summary = parts;
  return o;
}

Outcome_ balls_and_separation() {
  Outcome_ o;
  Rng rng(303, 3);
  std::size_t balls = 0, pairs = 0, members = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.uniform(1, 4);
    const auto b = gen_base(n, rng, {.pseudo = t % 4 == 0});
    const auto tau = topology_from_structure(b);
    for (int c = 0; c < 200; ++c) {
      const auto d = gen_member(b, rng);
      o.require(is_member(d, b).member, "sampled member is a member");
      ++members;
      for (std::size_t x = 0; x < n; ++x) {
        if (!d(x, x).is_finite()) continue;
        for (const auto& e : ball_family(d, x)) {
          ++balls;
          if (!tau.is_open(e.set)) {
            o.require(false, "ball " + e.set.to_string() + " of " + d.to_string() + " at " + std::to_string(x) +
                                 " is open");
          }
        }
        const Rational eps = d(x, x).value() + rng.weight(3) + Rational(1, 4);
        ++balls;
        if (!tau.is_open(ball(d, x, eps))) o.require(false, "random-radius ball is open");
      }
    }
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t xi = 0; xi < n; ++xi) {
        const auto w = separating_witness(b, x, xi);
        const bool neighbour = tau.min_neighborhood(x).contains(xi);
        if (neighbour) {
          o.require(!w.has_value(), "no separating witness inside N(x)");
          continue;
        }
        ++pairs;
        o.require(w && is_member(w->metric, b).member && w->ball.contains(x) && !w->ball.contains(xi),
                  "separating witness for (" + std::to_string(x) + "," + std::to_string(xi) + ")");
      }
  }
  o.summary = "100 bases, " + std::to_string(members) + " members, " + std::to_string(balls) +
              " balls open in the closed-form topology, " + std::to_string(pairs) + " non-neighbour pairs separated";
  return o;
}

std::vector<std::vector<PointSet>> families(std::size_t n, bool intersection_closed_only) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<PointSet>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << subsets); ++mask) {
    std::vector<PointSet> fam;
    for (std::size_t s = 0; s < subsets; ++s)
      if ((mask >> s) & 1U) fam.push_back(PointSet(s));
    if (intersection_closed_only && !SubsetFamily(n, fam).intersection_closed()) continue;
    out.push_back(std::move(fam));
  }
  return out;
}

Outcome_ bounded_structures() {
  Outcome_ o;
  const std::vector<ExtValue> grid{ExtValue(0), ExtValue(1), ExtValue(2), ExtValue::infinity()};
  const auto metrics = testing::metric_grid(3, grid, true, ValueMode::extended);
  const auto run_grid = [&](const char* id, bool closed_only, std::size_t& checked, std::size_t& failed) {
    for (const auto& fam : families(3, closed_only)) {
      Model base;
      base.add_space("X", Carrier(3));
      base.add_family("A", "X", SubsetFamily(3, fam));
      for (std::size_t i = 0; i < metrics.size(); ++i)
        for (std::size_t j = 0; j < metrics.size(); ++j) {
          Model m = base;
          m.add_metric("d1", "X", metrics[i]);
          m.add_metric("d2", "X", metrics[j]);
          const auto v = run_law(id, m);
          if (v.outcome == Outcome::vacuous) continue;
          ++checked;
          if (v.outcome == Outcome::fail) {
            if (failed++ == 0) o.details.push_back(std::string(id) + " first failure: " + v.clause + "\n" + indent(render_model(m)));
          }
        }
    }
  };
  std::size_t l1 = 0, l1_fail = 0, l2 = 0, l2_fail = 0, ex = 0, ex_fail = 0;
  run_grid("LAW-L1-CLOSED", true, l1, l1_fail);
  run_grid("LAW-L2-CLOSED", false, l2, l2_fail);
  run_grid("LAW-L2-EXIST", false, ex, ex_fail);
  o.require(l1 > 0 && l1_fail == 0, "LAW-L1-CLOSED exhaustive on intersection-closed families");
  o.require(l2 > 0 && l2_fail == 0, "LAW-L2-CLOSED exhaustive on all non-empty families");

  const auto hyp = search("HYP-L1-NEEDS-INTERSECTIONS", 3, 0, 100);
  o.require(hyp.found(), "HYP-L1-NEEDS-INTERSECTIONS finds a counterexample within 100 trials");
  const auto documented = parse_model(R"(space X
points 3
family A of X
set 0 1
set 1 2
metric d1 of X extended
0 1 inf
1 0 inf
inf inf 0
metric d2 of X extended
0 inf inf
inf 0 1
inf 1 0
)");
  const auto& fam = documented.family_ref("A").family;
  const bool sum_out = !in_L1(sum_metric(documented.metric_ref("d1").metric, documented.metric_ref("d2").metric), fam).value;
  o.require(run_law("HYP-L1-NEEDS-INTERSECTIONS", documented).outcome == Outcome::fail && sum_out,
            "documented instance: d1 + d2 is bounded on no member of {{0,1},{1,2}}");

  const auto exist = search("LAW-L2-EXIST", 3, 0, 100);
  o.summary = "LAW-L1-CLOSED " + std::to_string(l1) + " non-vacuous grid cases, " + std::to_string(l1_fail) +
              " failures; HYP-L1-NEEDS-INTERSECTIONS " +
              (hyp.found() ? "found at index " + std::to_string(*hyp.found_index) : "none-found") +
              "; LAW-L2-CLOSED (every member) " + std::to_string(l2) + " cases, " + std::to_string(l2_fail) +
              " failures; LAW-L2-EXIST (some member) " + std::to_string(ex) + " cases, " + std::to_string(ex_fail) +
              " failures, search " + (exist.found() ? "found at index " + std::to_string(*exist.found_index) : "none-found");
  o.details.push_back("LAW-L2-CLOSED verdict: " + std::string(l2_fail == 0 ? "holds" : "fails") +
                      "; LAW-L2-EXIST verdict: " + (ex_fail == 0 && !exist.found() ? "holds" : "fails") +
                      " (the two readings of the bounded-on-members structure disagree)");
  if (exist.found()) o.details.push_back("LAW-L2-EXIST clause: " + exist.clause + "\n" + indent(exist.shrunk));
  return o;
}

Outcome_ products() {
  Outcome_ o;
  const auto r = search("LAW-PROD-PM", 4, 0, 1000);
  o.require(!r.found(), "LAW-PROD-PM none-found over 10^3 factor pairs");
  if (r.found()) o.details.push_back(r.clause + "\n" + indent(r.shrunk));
  Rng rng(505, 5);
  std::size_t equal = 0;
  for (int t = 0; t < 1000; ++t) {
    const StructureBase bs[] = {gen_base(rng.uniform(1, 4), rng, {.pseudo = t % 3 == 0, .proper = true}),
                                gen_base(rng.uniform(1, 3), rng, {.pseudo = t % 5 == 0, .proper = true})};
    const bool same = uniformity_from_structure(product_base(bs)) ==
                      product_uniformity(uniformity_from_structure(bs[0]), uniformity_from_structure(bs[1]));
    equal += same;
  }
  o.require(equal == 1000, "product kernel equals kernel product on every proper pair");
  o.summary = "LAW-PROD-PM " + std::string(r.found() ? "found" : "none-found") + " over 1000 pairs; kernels equal on " +
              std::to_string(equal) + "/1000 proper pairs";
  return o;
}

Outcome_ membership_oracle() {
  Outcome_ o;
  const std::vector<ExtValue> grid{ExtValue(0), ExtValue(1), ExtValue(2)};
  const auto weak = testing::metric_grid(3, grid, false);
  std::size_t checked = 0, disagree = 0;
  const auto compare = [&](const WeakPseudoMetric& d, const StructureBase& b) {
    if (b.kind() == StructureKind::pseudo && !d.is_pseudo()) return;
    ++checked;
    if (is_member(d, b).member != testing::member_by_search(d, b)) {
      if (disagree++ == 0) o.details.push_back("first disagreement: " + d.to_string() + " vs envelope " + b.envelope().to_string());
    }
  };
  for (std::size_t i = 0; i < weak.size(); ++i)
    for (std::size_t j = i; j < weak.size(); ++j) {
      const auto b = i == j ? StructureBase::make({weak[i]}) : StructureBase::make({weak[i], weak[j]});
      for (const auto& d : weak) compare(d, b);
    }
  const std::size_t grid_cases = checked;
  Rng rng(606, 6);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = rng.uniform(1, 5);
    const auto b = gen_base(n, rng, {.pseudo = t % 4 == 0});
    const bool pseudo = b.kind() == StructureKind::pseudo;
    compare(t % 2 ? gen_member(b, rng) : gen_any_metric(n, rng, pseudo), b);
  }
  o.require(disagree == 0, "is_member agrees with the subset-and-ratio search");
  o.summary = std::to_string(weak.size()) + " grid metrics on 3 points, all one- and two-generator bases: " +
              std::to_string(grid_cases) + " grid cases and " + std::to_string(checked - grid_cases) +
              " random cases, " + std::to_string(disagree) + " disagreements";
  return o;
}

Outcome_ distinctions() {
  Outcome_ o;
  const auto s = search("DIST-SCALAR-WL", 2, 0, 100);
  o.require(s.found(), "DIST-SCALAR-WL finds within 100 trials at n=2");
  if (s.found()) {
    const auto m = parse_model(s.counterexample);
    const auto& f = m.map_ref("f").map;
    const auto& bx = m.base_ref("BX").base;
    const auto& by = m.base_ref("BY").base;
    o.require(is_scalar_weak_lipschitz(f, bx, by).holds && !is_weak_lipschitz(f, bx, by).holds,
              "DIST-SCALAR-WL counterexample re-validates");
    o.details.push_back("DIST-SCALAR-WL instance:\n" + indent(s.shrunk));
  }
  const auto t = search("DIST-FAMILY-VS-STRUCTURE-TOPOLOGY", 3, 0, 100);
  o.require(t.found(), "DIST-FAMILY-VS-STRUCTURE-TOPOLOGY finds within 100 trials at n=3");
  if (t.found()) {
    const auto m = parse_model(t.counterexample);
    const auto& b = m.base_ref("B").base;
    const auto fam = topology_from_family(b.generators());
    const auto full = topology_from_structure(b);
    o.require(fam.coarser_or_equal(full) && !(fam == full), "strictly coarser family topology re-validates");
  }
  const auto m1 = StructureBase::make({testing::m1()});
  const bool m1_strict = topology_from_family(m1.generators()).coarser_or_equal(topology_from_structure(m1)) &&
                         !(topology_from_family(m1.generators()) == topology_from_structure(m1));
  o.require(m1_strict, "the {m1} base qualifies");
  o.summary = std::string("DIST-SCALAR-WL ") + (s.found() ? "found at index " + std::to_string(*s.found_index) : "none-found") +
              "; DIST-FAMILY-VS-STRUCTURE-TOPOLOGY " +
              (t.found() ? "found at index " + std::to_string(*t.found_index) : "none-found") + "; {m1} qualifies";
  return o;
}

Outcome_ finite_collapse() {
  Outcome_ o;
  Rng rng(808, 8);
  std::size_t both = 0, neither = 0, member_not_uc = 0, uc_not_member = 0, law_failures = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = rng.uniform(1, 5);
    const bool pseudo = t % 3 == 0;
    const auto b = gen_base(n, rng, {.pseudo = pseudo, .proper = true});
    const auto u = uniformity_from_structure(b);
    for (int c = 0; c < 10; ++c) {
      const auto d = c % 2 ? gen_member(b, rng) : gen_any_metric(n, rng, b.kind() == StructureKind::pseudo);
      const bool member = is_member(d, b).member;
      const bool uc = is_uc_metric(d, u);
      if (member && uc) ++both;
      else if (!member && !uc) ++neither;
      else if (member) ++member_not_uc;
      else ++uc_not_member;
      Model m;
      m.add_space("X", Carrier(n));
      detail::add_base(m, "BX", "X", b, "b");
      m.add_metric("d", "X", d);
      if (run_law("LAW-MEMBER-UC", m).outcome == Outcome::fail) ++law_failures;
    }
  }
  o.require(member_not_uc == 0, "every member is uniformly continuous");
  o.require(uc_not_member == 0, "converse: every uniformly continuous metric is a member");
  o.require(law_failures == 0, "LAW-MEMBER-UC passes on every candidate");
  o.summary = "1000 candidates over 100 proper bases: " + std::to_string(both) + " member and uc, " +
              std::to_string(neither) + " neither, " + std::to_string(member_not_uc) + " member only, " +
              std::to_string(uc_not_member) + " uc only";
  o.details.push_back("member => uc is the theorem; uc => member is a finite-scale artifact property, not a "
                      "theorem");
  return o;
}

Outcome_ determinism() {
  Outcome_ o;
  std::size_t compared = 0;
  for (const auto& l : law_catalog()) {
    const std::size_t n = std::max<std::size_t>(4, l.min_points);
    const auto one = search(l.id, n, 7, 2000, 1);
    const auto eight = search(l.id, n, 7, 2000, 8);
    const auto again = search(l.id, n, 7, 2000, 1);
    ++compared;
    o.require(one.found_index == eight.found_index && one.clause == eight.clause &&
                  one.counterexample == eight.counterexample,
              std::string(l.id) + " identical verdict and index at 1 and 8 workers");
    o.require(render_report(to_report(one), false) == render_report(to_report(again), false),
              std::string(l.id) + " byte-identical single-worker report");
  }
  o.summary = std::to_string(compared) + " laws searched with 2000 trials at 1 and 8 workers";
  return o;
}

}  // namespace
}  // namespace wlip

int main() {
  using namespace wlip;
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"topologies from characteristic metrics", topologies_from_characteristic_metrics},
      {"continuity, weak Lipschitz and uniform continuity chain", implication_chain},
      {"closed-form topology against balls and separating witnesses", balls_and_separation},
      {"bounded-set structures", bounded_structures},
      {"products", products},
      {"membership against search oracle", membership_oracle},
      {"distinctions", distinctions},
      {"finite collapse of uniformly continuous metrics", finite_collapse},
      {"search determinism across workers", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome_ o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char time[32];
    std::snprintf(time, sizeof time, "%.1fs", secs);
    std::cout << "CRITERION " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << ": " << criteria[i].first << " -- "
              << o.summary << " [" << time << "]\n";
    for (const auto& d : o.details) std::cout << "    " << d << (d.back() == '\n' ? "" : "\n");
    std::cout << std::flush;
    failed += !o.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " of " : "all ") << criteria.size() << " criteria "
            << (failed ? "failed" : "passed") << "\n";
  return failed ? 1 : 0;
}
