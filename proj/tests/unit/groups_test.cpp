#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <optional>
#include <set>

#include "support/testkit.hpp"
#include "unil/groups/analysis.hpp"
#include "unil/io/json.hpp"

using namespace unil;

namespace {

std::size_t count_of_order(const FiniteGroup& g, std::size_t k) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < g.order(); ++x) {
    int p = int(x);
    std::size_t ord = 1;
    while (p != 0) {
      p = g.mul(p, int(x));
      ++ord;
    }
    if (ord == k) ++n;
  }
  return n;
}

bool is_homomorphism(const FiniteGroup& g, const FiniteGroup& h, const std::vector<int>& f) {
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      if (f[std::size_t(g.mul(int(a), int(b)))] != h.mul(f[a], f[b])) return false;
  return std::set<int>(f.begin(), f.end()).size() == h.order();
}

std::optional<ErrorCode> code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace

TEST(Construct, QuaternionHasOneInvolution) {
  FiniteGroup q = quaternionic_group(3);
  EXPECT_EQ(q.order(), 8u);
  EXPECT_EQ(count_of_order(q, 2), 1u);
  EXPECT_EQ(count_of_order(q, 4), 6u);
}

TEST(Construct, FamiliesHaveTheStatedOrders) {
  for (unsigned e = 2; e <= 5; ++e) EXPECT_EQ(dihedral_group(e).order(), std::size_t{1} << e);
  for (unsigned e = 4; e <= 5; ++e) EXPECT_EQ(semidihedral_group(e).order(), std::size_t{1} << e);
  for (unsigned e = 3; e <= 5; ++e) EXPECT_EQ(quaternionic_group(e).order(), std::size_t{1} << e);
  // dihedral groups of order 2^e have 2^(e-1) + 1 involutions
  EXPECT_EQ(count_of_order(dihedral_group(4), 2), 9u);
  // semidihedral: 2^(e-2) + 1 involutions
  EXPECT_EQ(count_of_order(semidihedral_group(4), 2), 5u);
}

TEST(Construct, InvertedC3IsS3) {
  FiniteGroup g = parse_group("semidirect(cyclic(3),cyclic(2),inv)");
  auto iso = find_isomorphism(g, symmetric_group(3));
  ASSERT_TRUE(iso.has_value());
  EXPECT_TRUE(is_homomorphism(g, symmetric_group(3), *iso));
  EXPECT_TRUE(are_isomorphic(g, dihedral_of_order(6)));
  EXPECT_FALSE(are_isomorphic(g, cyclic_group(6)));
}

TEST(Construct, InvalidPresentationsAreRejected) {
  EXPECT_EQ(code_of([] { semidihedral_group(3); }), ErrorCode::InvalidPresentation);
  EXPECT_EQ(code_of([] { quaternionic_group(2); }), ErrorCode::InvalidPresentation);
  EXPECT_EQ(code_of([] { parse_group("semidirect(S_3,C_2,inv)"); }), ErrorCode::NotAnAction);
  EXPECT_EQ(code_of([] { parse_group("C_4 y"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_group("Q_12"); }), ErrorCode::InvalidPresentation);
}

TEST(Construct, ParserShorthands) {
  EXPECT_EQ(parse_group("C_3 x Q_8").order(), 24u);
  EXPECT_TRUE(are_isomorphic(parse_group("V_4"), parse_group("direct(C_2,C_2)")));
  EXPECT_TRUE(are_isomorphic(parse_group("D_8"), dihedral_group(3)));
  EXPECT_TRUE(are_isomorphic(parse_group("SD_16"), semidihedral_group(4)));
  EXPECT_EQ(parse_group("A_4").order(), 12u);
  EXPECT_EQ(parse_group("trivial").order(), 1u);
}

TEST(Construct, JsonRoundTrip) {
  FiniteGroup g = parse_group("semidirect(cyclic(7),cyclic(3),pow(2))");
  FiniteGroup back = group_from_json(Json::parse(group_to_json(g).dump()));
  EXPECT_EQ(back.table(), g.table());
}

TEST(Sylow, A4HasNormalKleinFour) {
  SylowResult s = sylow2(alternating_group(4));
  EXPECT_EQ(s.subgroup.order(), 4u);
  EXPECT_TRUE(s.normal);
  EXPECT_TRUE(s.abelian);
}

TEST(Sylow, S3HasThreeConjugateSylows) {
  FiniteGroup g = symmetric_group(3);
  SylowResult s = sylow2(g);
  EXPECT_EQ(s.subgroup.order(), 2u);
  EXPECT_FALSE(s.normal);
  std::set<std::vector<int>> conjugates;
  for (std::size_t x = 0; x < g.order(); ++x) conjugates.insert(g.conjugate(int(x), s.subgroup).elements());
  EXPECT_EQ(conjugates.size(), 3u);
}

TEST(Sylow, OrderIsTheTwoPart) {
  for (const char* e : {"C_12", "S_4", "D_24", "C_3 x Q_8", "A_5", "C_15"}) {
    FiniteGroup g = parse_group(e);
    SylowResult s = sylow2(g);
    EXPECT_EQ(s.subgroup.order(), two_part(g.order())) << e;
    EXPECT_TRUE(g.is_subgroup(s.subgroup));
  }
}

TEST(Hyperelementary, S3Decomposes) {
  auto d = is_2hyperelementary(symmetric_group(3));
  ASSERT_TRUE(d.has_value());
  EXPECT_EQ(d->n, 3u);
  EXPECT_EQ(d->p.order(), 2u);
  EXPECT_FALSE(d->trivial_action());
  for (const auto& [x, k] : d->tau)
    if (x != 0) EXPECT_EQ(k, 2);  // inversion on C_3
  EXPECT_TRUE(are_isomorphic(reconstruct_hyperelementary(symmetric_group(3), *d), symmetric_group(3)));
}

TEST(Hyperelementary, A4IsNot) { EXPECT_FALSE(is_2hyperelementary(alternating_group(4)).has_value()); }

TEST(Hyperelementary, CategoryObjects) {
  EXPECT_EQ(hyperelementary_category(cyclic_group(6)).objects.size(), 4u);
  auto cat = hyperelementary_category(alternating_group(4));
  std::map<std::size_t, std::size_t> by_order;
  for (const auto& h : cat.objects) ++by_order[h.order()];
  EXPECT_EQ(cat.objects.size(), 9u);
  EXPECT_EQ(by_order, (std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}, {3, 4}, {4, 1}}));
  const FiniteGroup g = alternating_group(4);
  for (const auto& m : cat.morphisms) {
    const Subgroup& s = cat.objects[m.source];
    if (m.element == 0)
      EXPECT_TRUE(s.is_subset_of(cat.objects[m.target]));
    else
      EXPECT_EQ(g.conjugate(m.element, s), cat.objects[m.target]);
  }
}

TEST(Hyperelementary, ReconstructionMatchesForSmallGroups) {
  for (const char* e : {"C_6", "S_3", "D_12", "C_3 x Q_8", "semidirect(cyclic(3),cyclic(4),inv)", "C_5 x D_8"}) {
    FiniteGroup g = parse_group(e);
    auto d = is_2hyperelementary(g);
    ASSERT_TRUE(d.has_value()) << e;
    EXPECT_TRUE(are_isomorphic(reconstruct_hyperelementary(g, *d), g)) << e;
  }
}

TEST(DoubleCosets, S3WithTransposition) {
  FiniteGroup g = symmetric_group(3);
  Subgroup h = sylow2(g).subgroup;
  auto dcs = double_coset_decomposition(g, h, h);
  ASSERT_EQ(dcs.size(), 2u);
  std::multiset<std::size_t> sizes;
  for (const auto& dc : dcs) sizes.insert(dc.orbit_size);
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2}));
  EXPECT_EQ(testkit::double_coset_count(g, h.elements(), h.elements()), 2u);
}

TEST(DoubleCosets, D8Center) {
  FiniteGroup g = dihedral_group(3);
  Subgroup z = g.center();
  auto dcs = double_coset_decomposition(g, z, z);
  EXPECT_EQ(dcs.size(), testkit::double_coset_count(g, z.elements(), z.elements()));
  EXPECT_EQ(dcs.size(), 4u);
}

TEST(DoubleCosets, MackeyForAllSubgroupPairs) {
  for (const char* e : {"S_3", "D_8", "A_4", "Q_8"}) {
    FiniteGroup g = parse_group(e);
    auto subs = g.all_subgroups();
    for (const auto& k : subs)
      for (const auto& h : subs) {
        auto dcs = double_coset_decomposition(g, k, h);
        std::size_t total = 0;
        for (const auto& dc : dcs) {
          total += dc.orbit_size;
          ASSERT_EQ(dc.orbit_size * dc.stabilizer.order(), k.order());
          ASSERT_TRUE(verify_orbit_isomorphism(g, k, h, dc));
        }
        ASSERT_EQ(total, g.order() / h.order()) << e;
        ASSERT_EQ(dcs.size(), testkit::double_coset_count(g, k.elements(), h.elements())) << e;
      }
  }
}

TEST(Special, Examples) {
  EXPECT_EQ(classify_special_2group(parse_group("V_4")).kind, SpecialKind::NotSpecial);
  EXPECT_FALSE(testkit::special_by_enumeration(parse_group("V_4")));
  Special2Class q = classify_special_2group(quaternionic_group(3));
  EXPECT_EQ(q.kind, SpecialKind::Quaternionic);
  EXPECT_EQ(q.e, 3u);
  EXPECT_EQ(classify_special_2group(cyclic_group(16)).kind, SpecialKind::Cyclic);
  EXPECT_EQ(classify_special_2group(dihedral_group(4)).kind, SpecialKind::Dihedral);
  EXPECT_EQ(classify_special_2group(semidihedral_group(5)).kind, SpecialKind::Semidihedral);
  EXPECT_EQ(classify_special_2group(symmetric_group(3)).kind, SpecialKind::Not2Group);
  // the dihedral group of order 8 contains a normal Klein four-group
  EXPECT_EQ(classify_special_2group(dihedral_group(3)).kind, SpecialKind::NotSpecial);
  EXPECT_FALSE(testkit::special_by_enumeration(dihedral_group(3)));
}

TEST(Special, AgreesWithEnumerationOnSmall2Groups) {
  std::vector<FiniteGroup> groups;
  for (unsigned e = 0; e <= 4; ++e) groups.push_back(cyclic_group(std::size_t{1} << e));
  for (unsigned e = 2; e <= 4; ++e) groups.push_back(dihedral_group(e));
  groups.push_back(semidihedral_group(4));
  for (unsigned e = 3; e <= 4; ++e) groups.push_back(quaternionic_group(e));
  for (const char* e : {"C_2 x C_4", "C_2 x C_2 x C_2", "C_2 x Q_8", "C_2 x D_8", "C_4 x C_4", "semidirect(cyclic(4),cyclic(4),inv)"})
    groups.push_back(parse_group(e));
  for (const auto& g : groups) {
    const bool special = classify_special_2group(g).kind != SpecialKind::NotSpecial;
    EXPECT_EQ(special, testkit::special_by_enumeration(g)) << describe_group(g);
    EXPECT_EQ(special, is_special_by_definition(g));
  }
}

TEST(Describe, Names) {
  EXPECT_EQ(describe_group(parse_group("V_4")), "C_2xC_2");
  EXPECT_EQ(describe_group(quaternionic_group(3)), "Q_8");
  EXPECT_EQ(describe_group(alternating_group(4)), "A_4");
}

TEST(Subgroups, CountsMatchKnownLattices) {
  // frozen from enumeration: S_3 has 6 subgroups, D_8 has 10, Q_8 has 6, A_4 has 10
  EXPECT_EQ(symmetric_group(3).all_subgroups().size(), 6u);
  EXPECT_EQ(dihedral_group(3).all_subgroups().size(), 10u);
  EXPECT_EQ(quaternionic_group(3).all_subgroups().size(), 6u);
  EXPECT_EQ(alternating_group(4).all_subgroups().size(), 10u);
  EXPECT_EQ(quaternionic_group(3).normal_subgroups().size(), 6u);
}

TEST(Subgroups, QuotientByCenter) {
  FiniteGroup q = quaternionic_group(3);
  QuotientGroup qq = quotient_by(q, q.center());
  EXPECT_TRUE(are_isomorphic(qq.group, parse_group("V_4")));
  EXPECT_EQ(code_of([&] { quotient_by(symmetric_group(3), sylow2(symmetric_group(3)).subgroup); }), ErrorCode::NotNormal);
}
