// Acceptance run: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "support/testkit.hpp"
#include "unil/engine/engine.hpp"
#include "unil/nilpotent/nilpotent.hpp"
#include "unil/rings/named.hpp"
#include "unil/rings/polynomial.hpp"
#include "unil/tate/tate.hpp"

using namespace unil;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

bool cmat_equal(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

std::vector<Subgroup> central_involution_subgroups(const FiniteGroup& g) {
  std::vector<Subgroup> out;
  for (int x : g.center().elements())
    if (g.element_order(x) == 2) out.push_back(g.closure(std::vector<int>{x}));
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome tate_vanishing() {
  Outcome o;
  const std::vector<std::string> rings = {
      "Z[1/2]",          "Z[1/6]",          "Z[1/10]",         "Z[1/2][zeta_3]",  "Z[1/6][zeta_3]",
      "Z[1/2][zeta_4]",  "Z[1/2][zeta_5]",  "Z[1/10][zeta_5]", "Z[1/2][zeta_7]",  "Z[1/2][zeta_8]",
      "Z[1/2][zeta_12]", "Z[1/2][C_2]",     "Z[1/2][C_3]",     "Z[1/2][C_4]",     "Z[1/6][C_3]",
      "Z[1/2][V_4]",     "Z[1/2][C_8]",     "Z[1/2][S_3]",     "Z[1/2][D_8]",     "Z[1/2][Q_8]",
      "Z[1/6][C_6]",     "Z[1/2][A_4]"};
  o.require(rings.size() >= 20, "fewer than 20 rings");
  for (const auto& name : rings) {
    InvolutiveRing r = parse_ring(name);
    o.require(r.base().two_invertible(), name + ": 2 not invertible");
    VanishingReport rep = verify_vanishing_2_invertible(r);
    o.require(rep.vanishes, name + ": Tate cohomology nonzero");
    o.require(tate_cohomology(r, 0).value.is_trivial() && tate_cohomology(r, 1).value.is_trivial(), name + ": recomputed nonzero");
  }
  return o;
}

Outcome cyclotomic_vanishing() {
  Outcome o;
  std::size_t checked = 0;
  for (std::uint64_t d = 3; d <= 15; d += 2)
    for (std::uint64_t e = 0; e <= 2; ++e) {
      const std::uint64_t m = d << e;
      if (euler_phi(m) > 32) continue;
      InvolutiveRing r = cyclotomic_ring(m);
      for (int j = 0; j < 2; ++j)
        o.require(tate_cohomology(r, j).value.is_trivial(), "H^" + std::to_string(j) + "(Z[zeta_" + std::to_string(m) + "]) != 0");
      ++checked;
    }
  o.require(checked >= 15, "too few cyclotomic rings");
  for (std::uint64_t e = 1; e <= 3; ++e) {
    const std::uint64_t m = std::uint64_t{1} << e;
    o.require(!tate_cohomology(cyclotomic_ring(m), 0).value.is_trivial(), "H^0(Z[zeta_" + std::to_string(m) + "]) = 0");
  }
  return o;
}

Outcome mv_exactness() {
  Outcome o;
  const std::vector<std::pair<std::string, FiniteGroup>> groups = {
      {"C_2", cyclic_group(2)},       {"C_4", cyclic_group(4)},       {"C_2xC_2", direct_product(cyclic_group(2), cyclic_group(2))},
      {"C_8", cyclic_group(8)},       {"D_8", dihedral_group(3)},     {"Q_8", quaternionic_group(3)}};
  for (const auto& [name, g] : groups) {
    auto ks = central_involution_subgroups(g);
    o.require(!ks.empty(), name + ": no central subgroup of order 2");
    for (const auto& k : ks) {
      MayerVietorisReport rep = verify_mv_exactness(pullback_square(BasePID::integers(), g, k));
      o.require(rep.exact(), name + ": sequence not exact");
    }
  }
  return o;
}

Outcome square_root() {
  Outcome o;
  testkit::Rng rng(2024);
  for (const CoefficientRing& r : {CoefficientRing::dyadic(), CoefficientRing::prime_field(3), CoefficientRing::prime_field(5)}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = std::size_t(rng.range(1, 6));
      CMat rho = testkit::random_nilpotent(rng, r, n);
      SquareRootResult res = nilpotent_sqrt(r, rho);
      CMat one_plus = cmat_identity(n, r);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) one_plus(i, j) = r.embed(one_plus(i, j) + rho(i, j));
      CMat lhs = testkit::naive_product(testkit::naive_product(res.v, res.v, r), one_plus, r);
      o.require(cmat_equal(lhs, cmat_identity(n, r)), r.name() + ": V^2(1+rho) != 1");
      o.require(cmat_equal(testkit::naive_product(res.v, rho, r), testkit::naive_product(rho, res.v, r)),
                r.name() + ": V does not commute with rho");
      o.require(res.ok(), r.name() + ": library self-check failed");
    }
  }
  CoefficientRing r = CoefficientRing::dyadic();
  for (int trial = 0; trial < 25; ++trial) {
    auto [l0, l1] = testkit::random_lagrangian_pair(rng, r, std::size_t(rng.range(1, 4)));
    o.require(verify_lagrangian_transport(r, l0, l1).ok(), "Lagrangian transport failed");
  }
  return o;
}

Outcome crt() {
  Outcome o;
  for (std::uint64_t n : {3u, 5u, 7u, 9u, 15u}) {
    const std::string tag = "N=" + std::to_string(n) + ": ";
    const BasePID base = BasePID::localized(n);
    CrtSplitting s = crt_split_cyclic(base, n);
    const InvolutiveRing& src = *s.source;
    const InvolutiveRing& tgt = *s.target.ring;
    o.require(vectors_equal(s.map.apply(src.one()), tgt.one()), tag + "not unital");
    for (std::size_t i = 0; i < src.rank(); ++i) {
      Vec fi = s.map.apply(src.basis(i));
      o.require(vectors_equal(s.map.apply(src.involute(src.basis(i))), tgt.involute(fi)), tag + "not involutive");
      for (std::size_t j = 0; j < src.rank(); ++j)
        o.require(vectors_equal(s.map.apply(src.multiply(src.basis(i), src.basis(j))), tgt.multiply(fi, s.map.apply(src.basis(j)))),
                  tag + "not multiplicative");
    }
    SmithForm sf = smith_normal_form(s.map.matrix, base);
    bool units = sf.rank == src.rank() && s.map.matrix.rows() == src.rank();
    for (std::size_t i = 0; units && i < sf.rank; ++i) units = base.is_unit(sf.D(i, i));
    o.require(units, tag + "not bijective");
    o.require(s.bijective && s.check.ok(), tag + "library report disagrees");
    o.require(!s.divisors.empty() && s.divisors.front() == 1, tag + "first factor is not d = 1");
    for (std::size_t j = 0; j < src.rank(); ++j) o.require(s.map.matrix(0, j).is_one(), tag + "first row is not the augmentation");
    // through the projection: the d = 1 coordinate of f(x) is the coefficient sum
    testkit::Rng rng(n);
    for (int trial = 0; trial < 10; ++trial) {
      Vec x = src.zero();
      Scalar sum(0);
      for (auto& c : x) {
        c = Scalar(rng.range(-5, 5));
        sum = sum + c;
      }
      Vec p = s.target.projections.front().apply(s.map.apply(x));
      o.require(p.size() == 1 && p[0] == sum, tag + "projection is not the augmentation");
    }
  }
  return o;
}

Outcome localization() {
  Outcome o;
  for (const char* name : {"Z", "Z[C_2]", "Z[zeta_3]", "Z[Q_8]"}) {
    InvolutiveRing a = parse_ring(name);
    for (std::uint64_t n : {3u, 5u, 15u}) {
      LocalizationReport rep = verify_localization_iso(a, n);
      o.require(rep.ok(), std::string(name) + ": induced map not an isomorphism");
      for (int j = 0; j < 2; ++j) o.require(rep.before[j] == rep.after[j], std::string(name) + ": groups differ");
    }
  }
  return o;
}

Outcome char2_factorization() {
  Outcome o;
  for (std::uint64_t d = 1; d <= 25; d += 2) {
    const std::string tag = "d=" + std::to_string(d) + ": ";
    std::uint64_t ord = 1, p = 2 % d;
    while (d > 1 && p != 1) {
      p = (p * 2) % d;
      ++ord;
    }
    const std::uint64_t phi = euler_phi(d);
    CyclotomicFactorization f = factor_cyclotomic_mod2(d);
    o.require(f.factors.size() == phi / ord, tag + "wrong number of factors");
    std::uint64_t product = 1;
    for (auto q : f.factors) {
      o.require(std::uint64_t(testkit::gf2_deg(q)) == ord, tag + "factor of wrong degree");
      o.require(testkit::gf2_irreducible_trial(q), tag + "factor not irreducible");
      product = testkit::gf2_mul(product, q);
    }
    std::uint64_t reduced = 0;
    IntPoly phi_d = cyclotomic_polynomial(d);
    for (std::size_t i = 0; i < phi_d.size(); ++i)
      if (phi_d[i] % 2 != 0) reduced |= std::uint64_t{1} << i;
    o.require(product == reduced, tag + "product is not Phi_d mod 2");
  }
  return o;
}

Outcome reduction_certificates() {
  Outcome o;
  const std::vector<std::string> expected = {"0", "0", "xZ[x]/2", "Z[x]/4 + Z[x]/2 + Z[x]/2 + Z[x]/2"};
  auto round_trip = [&](const Certificate& c, const std::string& tag) {
    const std::string text = c.dump();
    Certificate back = Certificate::from_json(Json::parse(text));
    o.require(back.dump() == text, tag + ": JSON round trip not byte-identical");
    ReplayReport rep = replay(back);
    o.require(rep.ok, tag + ": replay diverged: " + rep.message);
  };
  for (const auto& [label, g] : testkit::odd_order_corpus()) {
    if (g.order() > 27) continue;
    for (long long n = 0; n < 4; ++n) {
      const std::string tag = label + " n=" + std::to_string(n);
      Certificate c = reduce(g, n);
      o.require(c.outcome == "normal_form" && c.final_term.str() == expected[std::size_t(n)], tag + ": wrong value");
      round_trip(c, tag);
    }
  }
  const FiniteGroup v4 = direct_product(cyclic_group(2), cyclic_group(2));
  for (long long n = 0; n < 4; ++n) {
    Certificate c = reduce(alternating_group(4), n);
    const NLTerm& f = c.final_term;
    bool shape = f.kind == NLTerm::Kind::Coinvariants && f.action->acting.order() == 3 && f.children.size() == 1;
    if (shape) {
      const NLTerm* inner = &f.children[0];
      if (inner->kind == NLTerm::Kind::Extension) inner = &inner->children.at(inner->unknown);
      shape = inner->is_atom() && inner->descriptor().kind() == DescriptorKind::GroupRing &&
              inner->descriptor().base() == BasePID::integers() && are_isomorphic(inner->descriptor().group(), v4);
    }
    o.require(shape, "A_4 n=" + std::to_string(n) + ": final term is " + f.str());
    round_trip(c, "A_4");
  }
  Certificate s3 = reduce(symmetric_group(3), 0);
  o.require(s3.outcome == "hypothesis_failed", "S_3 did not fail its hypothesis");
  round_trip(s3, "S_3");
  return o;
}

Outcome special_2groups() {
  Outcome o;
  struct Case {
    FiniteGroup g;
    SpecialKind kind;
    unsigned e;
  };
  std::vector<Case> cases;
  for (unsigned e = 0; e <= 5; ++e) cases.push_back({cyclic_group(std::size_t{1} << e), SpecialKind::Cyclic, e});
  for (unsigned e = 3; e <= 5; ++e) cases.push_back({dihedral_group(e), SpecialKind::Dihedral, e});
  for (unsigned e = 4; e <= 5; ++e) cases.push_back({semidihedral_group(e), SpecialKind::Semidihedral, e});
  for (unsigned e = 3; e <= 5; ++e) cases.push_back({quaternionic_group(e), SpecialKind::Quaternionic, e});
  for (const auto& c : cases) {
    const bool oracle = testkit::special_by_enumeration(c.g);
    Special2Class got = classify_special_2group(c.g);
    const bool special = got.kind != SpecialKind::NotSpecial && got.kind != SpecialKind::Not2Group;
    const std::string tag = describe_group(c.g);
    o.require(special == oracle, tag + ": classifier disagrees with enumeration");
    if (oracle) o.require(got.kind == c.kind && got.e == c.e, tag + ": wrong family or exponent");
  }
  const FiniteGroup c2 = cyclic_group(2), c4 = cyclic_group(4);
  const std::vector<FiniteGroup> others = {
      direct_product(c2, c2),
      direct_product(c2, c4),
      direct_product(direct_product(c2, c2), c2),
      direct_product(c4, c4),
      direct_product(c2, cyclic_group(8)),
      direct_product(c2, dihedral_group(3)),
      direct_product(c2, quaternionic_group(3)),
      direct_product(direct_product(c2, c2), c4),
      semidirect_product(cyclic_group(8), c2, {power_map(cyclic_group(8), 5)}),
      semidirect_product(c4, c4, {power_map(c4, 3)})};
  for (const auto& g : others) {
    const bool oracle = testkit::special_by_enumeration(g);
    Special2Class got = classify_special_2group(g);
    o.require(!oracle, describe_group(g) + ": expected a non-special group");
    o.require(got.kind == SpecialKind::NotSpecial, describe_group(g) + ": classified as special");
  }
  return o;
}

Outcome mackey() {
  Outcome o;
  for (const FiniteGroup& g : {symmetric_group(3), dihedral_group(3), alternating_group(4), quaternionic_group(3)}) {
    const auto subs = g.all_subgroups();
    for (const auto& k : subs)
      for (const auto& h : subs) {
        auto dcs = double_coset_decomposition(g, k, h);
        std::size_t total = 0;
        for (const auto& dc : dcs) {
          total += dc.orbit_size;
          o.require(dc.orbit_size * dc.stabilizer.order() == k.order(), describe_group(g) + ": orbit-stabilizer fails");
          o.require(verify_orbit_isomorphism(g, k, h, dc), describe_group(g) + ": K-set isomorphism fails");
        }
        o.require(total == g.order() / h.order(), describe_group(g) + ": indices do not sum to [G:H]");
        o.require(dcs.size() == testkit::double_coset_count(g, k.elements(), h.elements()),
                  describe_group(g) + ": double coset count disagrees");
      }
  }
  return o;
}

Outcome splitting() {
  Outcome o;
  for (long long n = 0; n <= 40; ++n)
    for (long long m = 0; m <= 40; ++m) {
      if (n + m <= 5) {
        bool rejected = false;
        try {
          splitting_decision(n, m);
        } catch (const Error& e) {
          rejected = e.code() == ErrorCode::DimensionTooSmall;
        }
        o.require(rejected, "n+m <= 5 accepted");
        continue;
      }
      const long long r = (n + m) % 4;
      const bool expect = m % 2 == 1 ? (r == 0 || r == 3) : (r == 1 || r == 2);
      o.require(splitting_decision(n, m).decision == (expect ? "splittable" : "infinite_counterexamples"),
                "mismatch at n=" + std::to_string(n) + " m=" + std::to_string(m));
    }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit;  // seconds, 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "Tate vanishing with 2 invertible", 5, tate_vanishing},
      {2, "cyclotomic Tate vanishing", 30, cyclotomic_vanishing},
      {3, "Mayer-Vietoris exactness", 30, mv_exactness},
      {4, "nilpotent square root and Lagrangian transport", 10, square_root},
      {5, "CRT splitting of Z[1/N][C_N]", 10, crt},
      {6, "localization isomorphism", 0, localization},
      {7, "cyclotomic factorization mod 2", 0, char2_factorization},
      {8, "reduction certificates", 0, reduction_certificates},
      {9, "special 2-group classification", 60, special_2groups},
      {10, "Mackey double cosets", 0, mackey},
      {11, "splitting decision", 0, splitting},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.ok && c.limit > 0 && secs > c.limit) {
      out.ok = false;
      out.detail = "time limit " + std::to_string(int(c.limit)) + " s exceeded";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (out.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << timing << ")";
    if (!out.ok) std::cout << " -- " << out.detail;
    std::cout << std::endl;
    failures += !out.ok;
  }
  return failures == 0 ? 0 : 1;
}
