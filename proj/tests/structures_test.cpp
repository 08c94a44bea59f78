#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

namespace wlip {
namespace {

using testing::base_of;
using testing::d_a;
using testing::disc2;
using testing::kInf;
using testing::m1;
using testing::member_by_search;
using testing::metric_grid;
using testing::zero_metric;

WeakPseudoMetric scaled(const Rational& a, const WeakPseudoMetric& d) {
  return *WeakPseudoMetric::from_form(scale_metric(a, d));
}

TEST(Envelope, Examples) {
  EXPECT_EQ(envelope(base_of({m1()})), m1().form());
  const auto b = base_of({m1(), d_a(3, {0})});
  EXPECT_EQ(b.envelope().matrix(), (Matrix{{0, 1, 1}, {1, 1, 1}, {1, 1, 2}}));
  EXPECT_TRUE(b.proper());
  const auto improper = base_of({d_a(3, {0}), d_a(3, {2})});
  EXPECT_FALSE(improper.proper());
  EXPECT_FALSE(improper.envelope().has_diagonal_zero());
}

TEST(Envelope, KindFollowsGenerators) {
  EXPECT_EQ(base_of({disc2()}).kind(), StructureKind::pseudo);
  EXPECT_EQ(base_of({disc2(), testing::mw()}).kind(), StructureKind::weak);
}

TEST(Envelope, RejectsInfiniteGenerators) {
  const auto d = WeakPseudoMetric::make({{0, kInf}, {kInf, 0}}, ValueMode::extended);
  try {
    (void)base_of({d});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ext_value_in_strict_mode);
  }
}

TEST(Membership, Examples) {
  const auto b = base_of({m1()});
  auto c = is_member(m1(), b);
  EXPECT_TRUE(c.member);
  EXPECT_EQ(*c.alpha_star, Rational(1));
  c = is_member(scaled(3, m1()), b);
  EXPECT_TRUE(c.member);
  EXPECT_EQ(*c.alpha_star, Rational(3));
  c = is_member(WeakPseudoMetric::make({{0, 1, 1}, {1, 0, 1}, {1, 1, 2}}), b);
  EXPECT_FALSE(c.member);
  EXPECT_EQ(*c.violating_pair, (PointPair{0, 1}));
}

TEST(Membership, ZeroAgainstZero) {
  const auto c = is_member(zero_metric(2), base_of({zero_metric(2)}));
  EXPECT_TRUE(c.member);
  EXPECT_EQ(*c.alpha_star, Rational(1));
}

TEST(Membership, Errors) {
  try {
    (void)is_member(testing::mw(), base_of({disc2()}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kind_mismatch);
  }
  try {
    (void)is_member(m1(), base_of({disc2()}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::carrier_mismatch);
  }
}

TEST(Membership, AgreesWithSearchOnGrid) {
  const std::vector<ExtValue> grid{ExtValue(0), ExtValue(1), ExtValue(2)};
  const auto weak = metric_grid(3, grid, false);
  // Bases: every single generator, plus a sample of pairs.
  std::vector<StructureBase> bases;
  for (const auto& g : weak) bases.push_back(base_of({g}));
  for (std::size_t i = 0; i < weak.size(); i += 7)
    for (std::size_t j = i + 1; j < weak.size(); j += 11) bases.push_back(base_of({weak[i], weak[j]}));
  std::size_t members = 0, total = 0;
  for (const auto& b : bases) {
    for (const auto& d : weak) {
      if (b.kind() == StructureKind::pseudo && !d.is_pseudo()) continue;
      const auto c = is_member(d, b);
      ASSERT_EQ(c.member, member_by_search(d, b)) << d.to_string() << " vs " << b.envelope().to_string();
      if (c.member) {
        EXPECT_TRUE(dominated_by(d, *c.alpha_star, b.envelope()));
        ++members;
      } else {
        const auto [i, j] = *c.violating_pair;
        EXPECT_TRUE(b.envelope()(i, j).is_zero());
        EXPECT_FALSE(d(i, j).is_zero());
      }
      ++total;
    }
  }
  EXPECT_GT(members, 0U);
  EXPECT_LT(members, total);
}

TEST(BaseCriterion, Examples) {
  const std::vector<WeakPseudoMetric> single{m1()};
  EXPECT_TRUE(is_base_for_structure(single).is_base);
  const std::vector<WeakPseudoMetric> pair{d_a(3, {0}), m1()};
  const auto c = is_base_for_structure(pair);
  EXPECT_TRUE(c.is_base);
  ASSERT_EQ(c.witnesses.size(), 3U);
  EXPECT_EQ(c.witnesses[1].first, 0U);
  EXPECT_EQ(c.witnesses[1].second, Rational(2));
  const std::vector<WeakPseudoMetric> disjoint{d_a(3, {0}), d_a(3, {2})};
  const auto bad = is_base_for_structure(disjoint);
  EXPECT_FALSE(bad.is_base);
  EXPECT_EQ(*bad.offending, (PointPair{0, 1}));
}

TEST(SupClosure, Examples) {
  const std::vector<WeakPseudoMetric> single{m1()};
  auto s = sup_closure(single, 1);
  ASSERT_EQ(s.size(), 1U);
  EXPECT_EQ(s[0].sup, m1().form());
  EXPECT_TRUE(s[0].weak_pm_valid);

  const std::vector<WeakPseudoMetric> disjoint{d_a(3, {0}), d_a(3, {2})};
  s = sup_closure(disjoint, 2);
  ASSERT_EQ(s.size(), 3U);
  EXPECT_EQ(s[2].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(s[2].weak_pm_valid);

  const std::vector<WeakPseudoMetric> comparable{m1(), scaled(2, m1())};
  s = sup_closure(comparable, 2);
  EXPECT_EQ(s[2].sup, scale_metric(2, m1()));
  EXPECT_TRUE(s[2].weak_pm_valid);
}

TEST(SupClosure, CapAndExplosion) {
  const std::vector<WeakPseudoMetric> three{m1(), d_a(3, {0}), d_a(3, {1})};
  EXPECT_EQ(sup_closure(three, 1).size(), 3U);
  EXPECT_EQ(sup_closure(three, 2).size(), 6U);
  EXPECT_EQ(sup_closure(three, 9).size(), 7U);
  const std::vector<WeakPseudoMetric> many(17, zero_metric(2));
  try {
    (void)sup_closure(many, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::subset_explosion);
  }
}

TEST(StructuresEqual, Examples) {
  EXPECT_TRUE(structures_equal(base_of({m1()}), base_of({scaled(5, m1())})));
  EXPECT_FALSE(structures_equal(base_of({m1()}), base_of({d_a(3, {0})})));
  const auto b = base_of({m1(), d_a(3, {0, 1})});
  EXPECT_TRUE(structures_equal(b, b));
}

TEST(StructuresEqual, Errors) {
  try {
    (void)structures_equal(base_of({m1()}), base_of({disc2()}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::carrier_mismatch);
  }
  try {
    (void)structures_equal(base_of({m1()}), base_of({zero_metric(3)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kind_mismatch);
  }
}

TEST(StructuresEqual, MembershipAgreesWhenKernelsMatch) {
  Rng rng(2024, 1);
  std::size_t equal_pairs = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = rng.uniform(1, 4);
    const auto b1 = gen_base(n, rng, {});
    const auto b2 = gen_base(n, rng, {});
    if (b1.kind() != b2.kind()) continue;
    // A base with the same kernel: rescale every generator of b1.
    std::vector<WeakPseudoMetric> gens;
    for (const auto& g : b1.generators()) gens.push_back(scaled(Rational(rng.uniform(1, 5), 2), g));
    const auto b1s = StructureBase::make(gens);
    ASSERT_TRUE(structures_equal(b1, b1s));
    const bool eq = structures_equal(b1, b2);
    equal_pairs += eq;
    for (int c = 0; c < 100; ++c) {
      const auto d = gen_weak_pm(n, rng, c % 2 ? MetricGenMode::per : MetricGenMode::repair,
                                 b1.kind() == StructureKind::pseudo);
      EXPECT_EQ(is_member(d, b1).member, is_member(d, b1s).member);
      if (eq) {
        EXPECT_EQ(is_member(d, b1).member, is_member(d, b2).member);
      }
    }
  }
  EXPECT_GT(equal_pairs, 0U);
}

TEST(StructuresEqual, IsAnEquivalence) {
  Rng rng(77, 3);
  std::vector<StructureBase> bases;
  for (int t = 0; t < 60; ++t) bases.push_back(gen_base(2, rng, {.pseudo = true}));
  for (const auto& a : bases) {
    EXPECT_TRUE(structures_equal(a, a));
    for (const auto& b : bases) {
      EXPECT_EQ(structures_equal(a, b), structures_equal(b, a));
      for (const auto& c : bases)
        if (structures_equal(a, b) && structures_equal(b, c)) {
          EXPECT_TRUE(structures_equal(a, c));
        }
    }
  }
}

TEST(Ptau, Examples) {
  const auto indiscrete = ptau_base(FiniteTopology::from_opens(3, std::vector<PointSet>{PointSet(), PointSet::full(3)}));
  ASSERT_EQ(indiscrete.generators().size(), 1U);
  EXPECT_EQ(indiscrete.generators()[0], zero_metric(3));

  const auto t = ptau_base(FiniteTopology::from_opens(3, std::vector<PointSet>{PointSet(), PointSet{0}, PointSet::full(3)}));
  ASSERT_EQ(t.generators().size(), 2U);
  EXPECT_EQ(t.generators()[0], d_a(3, {0}));
  EXPECT_EQ(t.generators()[1], zero_metric(3));
  EXPECT_TRUE(t.proper());

  const auto disjoint = ptau_base(
      FiniteTopology::from_opens(
      3, std::vector<PointSet>{PointSet(), PointSet{0}, PointSet{2}, PointSet{0, 2}, PointSet::full(3)}));
  EXPECT_FALSE(disjoint.proper());
}

TEST(Ptau, GeneratorsAreValidOnEveryTopology) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for_each_topology(n, [&](std::size_t, const FiniteTopology& t) {
      const auto b = ptau_base(t);
      for (const auto& g : b.generators()) EXPECT_TRUE(validate_weak_pm(g.matrix()).ok());
      return true;
    });
  }
}

TEST(CharacteristicMetric, EmptySetIsRejected) { EXPECT_THROW((void)characteristic_metric(2, PointSet()), Error); }

WeakPseudoMetric block_metric(std::size_t n, std::vector<PointSet> blocks) {
  Matrix m(n, kInf);
  for (auto b : blocks)
    for (auto i : b.elements())
      for (auto j : b.elements()) m(i, j) = ExtValue(i == j ? 0 : 1);
  return WeakPseudoMetric::make(std::move(m), ValueMode::extended);
}

TEST(Bounded, Examples) {
  const SubsetFamily fam(3, {PointSet{0, 1}, PointSet{1, 2}});
  const auto z = zero_metric(3);
  EXPECT_TRUE(in_L1(z, fam).value);
  EXPECT_TRUE(in_L2(z, fam).value);
  EXPECT_TRUE(in_L1(z, fam).vacuous);

  const auto d1 = block_metric(3, {PointSet{0, 1}, PointSet{2}});
  EXPECT_TRUE(in_L1(d1, fam).value);
  EXPECT_FALSE(in_L2(d1, fam).value);
  EXPECT_FALSE(in_L1(d1, fam).vacuous);

  const auto finite = WeakPseudoMetric::make(m1().matrix(), ValueMode::extended);
  EXPECT_TRUE(in_L1(finite, fam).value);
  EXPECT_TRUE(in_L2(finite, fam).value);
}

TEST(Bounded, SumOfBlocksLeavesL1WithoutIntersections) {
  const SubsetFamily fam(3, {PointSet{0, 1}, PointSet{1, 2}});
  EXPECT_FALSE(fam.intersection_closed());
  const auto d1 = block_metric(3, {PointSet{0, 1}, PointSet{2}});
  const auto d2 = block_metric(3, {PointSet{0}, PointSet{1, 2}});
  EXPECT_TRUE(in_L1(d1, fam).value);
  EXPECT_TRUE(in_L1(d2, fam).value);
  EXPECT_FALSE(in_L1(sum_metric(d1, d2), fam).value);
}

std::vector<SubsetFamily> all_families(std::size_t n, bool intersection_closed) {
  std::vector<SubsetFamily> out;
  const std::size_t subsets = std::size_t{1} << n;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << subsets); ++mask) {
    std::vector<PointSet> members;
    for (std::size_t s = 0; s < subsets; ++s)
      if ((mask >> s) & 1U) members.push_back(PointSet(s));
    SubsetFamily fam(n, std::move(members));
    if (!intersection_closed || fam.intersection_closed()) out.push_back(std::move(fam));
  }
  return out;
}

using Predicate = BoundednessVerdict (*)(const PreMetricForm&, const SubsetFamily&);

/// Count of violations of closure under sum, sup, scaling and domination.
std::size_t closure_failures(Predicate in, const std::vector<SubsetFamily>& families) {
  const std::vector<ExtValue> grid{ExtValue(0), ExtValue(1), ExtValue(2), kInf};
  const auto metrics = metric_grid(3, grid, true, ValueMode::extended);
  std::size_t failures = 0;
  for (const auto& fam : families) {
    std::vector<const WeakPseudoMetric*> inside;
    for (const auto& d : metrics)
      if (in(d, fam).value) inside.push_back(&d);
    for (const auto* a : inside) {
      failures += !in(scale_metric(Rational(1, 2), *a), fam).value;
      for (const auto& c : metrics)
        if (dominated_by(c, 1, *a)) failures += !in(c, fam).value;
      for (const auto* b : inside) {
        failures += !in(sum_metric(*a, *b), fam).value;
        failures += !in(sup_metric(*a, *b), fam).value;
      }
    }
  }
  return failures;
}

TEST(Bounded, L1ClosedOnIntersectionClosedFamilies) {
  EXPECT_EQ(closure_failures(&in_L1, all_families(3, true)), 0U);
}

TEST(Bounded, L1NotClosedOnArbitraryFamilies) {
  EXPECT_GT(closure_failures(&in_L1, all_families(3, false)), 0U);
}

TEST(Bounded, L2ClosedOnEveryFamily) { EXPECT_EQ(closure_failures(&in_L2, all_families(3, false)), 0U); }

TEST(Bounded, WeakSumWithDisjointDiagonalZerosIsNotWeak) {
  const auto a = WeakPseudoMetric::make({{0, 1}, {1, 1}});
  const auto b = WeakPseudoMetric::make({{1, 1}, {1, 0}});
  EXPECT_FALSE(validate_weak_pm(sum_metric(a, b).matrix()).ok());
  EXPECT_FALSE(validate_weak_pm(sup_metric(a, b).matrix()).ok());
}

TEST(Product, Examples) {
  const std::vector<WeakPseudoMetric> two{m1(), disc2()};
  const auto p = product_metric(two);
  const ProductIndex idx({3, 2});
  EXPECT_EQ(p(idx.index({0, 0}), idx.index({2, 1})), ExtValue(2));
  const std::vector<WeakPseudoMetric> one{m1()};
  EXPECT_EQ(product_metric(one), m1());
  const std::vector<WeakPseudoMetric> zeros{zero_metric(2), zero_metric(2)};
  EXPECT_EQ(product_metric(zeros), zero_metric(4));
  try {
    (void)product_metric(std::span<const WeakPseudoMetric>());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_factor_list);
  }
}

TEST(Product, BaseKernel) {
  const StructureBase bs[] = {base_of({m1()}), base_of({disc2()})};
  const auto p = product_base(bs);
  ASSERT_EQ(p.size(), 6U);
  ASSERT_EQ(p.generators().size(), 1U);
  const ProductIndex idx({3, 2});
  const Relation z1 = zero_relation(m1());
  for (std::size_t u = 0; u < 3; ++u)
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t v = 0; v < 3; ++v)
        for (std::size_t b = 0; b < 2; ++b)
          EXPECT_EQ(p.zero().contains(idx.index({u, a}), idx.index({v, b})), z1.contains(u, v) && a == b);
}

TEST(Product, SingleFactorKeepsTheStructure) {
  const auto b = base_of({m1(), d_a(3, {0, 1})});
  const StructureBase bs[] = {b};
  EXPECT_TRUE(structures_equal(product_base(bs), b));
}

TEST(Product, ImproperFactorGivesImproperProduct) {
  const StructureBase bs[] = {base_of({d_a(3, {0}), d_a(3, {2})}), base_of({disc2()})};
  const auto p = product_base(bs);
  EXPECT_FALSE(p.proper());
  EXPECT_EQ(p.generators().size(), 2U);
}

TEST(Product, GeneratedStructureContainsEverySumOfMembers) {
  Rng rng(5, 9);
  for (int t = 0; t < 200; ++t) {
    const StructureBase bs[] = {gen_base(rng.uniform(1, 3), rng, {}), gen_base(rng.uniform(1, 3), rng, {})};
    const auto p = product_base(bs);
    const WeakPseudoMetric members[] = {gen_member(bs[0], rng), gen_member(bs[1], rng)};
    EXPECT_TRUE(is_member(product_metric(members), p).member);
  }
}

TEST(Product, RandomPairsValidate) {
  Rng rng(11, 2);
  for (int t = 0; t < 1000; ++t) {
    const bool pseudo = t % 2 == 0;
    const WeakPseudoMetric ds[] = {gen_weak_pm(rng.uniform(1, 4), rng, MetricGenMode::repair, pseudo),
                                   gen_weak_pm(rng.uniform(1, 4), rng, MetricGenMode::per, pseudo)};
    const auto p = product_metric(ds);
    EXPECT_TRUE(validate_weak_pm(p.matrix()).ok());
    if (pseudo) {
      EXPECT_TRUE(validate_pseudo_metric(p.matrix()).ok());
    }
  }
}

}  // namespace
}  // namespace wlip
