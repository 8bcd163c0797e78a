#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unil/engine/term.hpp"
#include "unil/groups/construct.hpp"
#include "unil/rings/polynomial.hpp"
#include "unil/tate/tate.hpp"

namespace unil {

/// Decides the truth value recorded for a side condition. The default returns
/// the computed value; tests substitute one to inject faults.
using SideConditionOracle = std::function<bool(const std::string& rule, const std::string& condition, bool computed)>;

struct RuleOutcome {
  enum class Status { NotMatched, ConditionFailed, Applied };
  Status status = Status::NotMatched;
  NLTerm after;
  Json evidence = Json::object();
  std::vector<std::string> failed;

  bool applied() const { return status == Status::Applied; }
};

class RuleContext {
 public:
  SideConditionOracle oracle;
  std::size_t max_rank = 64;              // largest ring built for evidence
  std::size_t square_order_limit = 32;    // pullback squares verified up to this group order
  std::size_t category_order_limit = 32;  // hyperelementary subgroup lists up to this order

  bool memoizing() const { return !oracle; }
  std::map<std::string, RuleOutcome>& memo() { return memo_; }

 private:
  std::map<std::string, RuleOutcome> memo_;
};

namespace detail {

/// Collects side conditions and evidence for one rule application.
class RuleRun {
 public:
  RuleRun(std::string rule, RuleContext& ctx) : rule_(std::move(rule)), ctx_(ctx) {}

  bool check(const std::string& condition, bool computed) {
    const bool v = ctx_.oracle ? ctx_.oracle(rule_, condition, computed) : computed;
    out_.evidence["conditions"][condition] = v;
    if (!v) out_.failed.push_back(condition);
    return v;
  }
  Json& evidence() { return out_.evidence; }

  RuleOutcome finish(NLTerm after) {
    if (!out_.failed.empty()) {
      out_.status = RuleOutcome::Status::ConditionFailed;
      out_.evidence["failed"] = out_.failed;
      return out_;
    }
    out_.status = RuleOutcome::Status::Applied;
    out_.after = canonicalize(after);
    return out_;
  }
  RuleOutcome fail_now() { return finish(NLTerm::zero()); }

 private:
  std::string rule_;
  RuleContext& ctx_;
  RuleOutcome out_;
};

inline RuleOutcome not_matched() { return RuleOutcome{}; }

inline bool is_z_group_ring(const NLTerm& t) {
  return t.is_atom() && !t.reduced && t.descriptor().kind() == DescriptorKind::GroupRing &&
         t.descriptor().base() == BasePID::integers();
}

inline std::uint64_t odd_part(std::uint64_t m) {
  while (m % 2 == 0) m /= 2;
  return m;
}

inline FiniteGroup abelian_from_invariants(const std::vector<std::size_t>& inv) {
  FiniteGroup g = cyclic_group(1);
  for (auto d : inv)
    if (d > 1) g = direct_product(g, cyclic_group(d));
  return g;
}

inline Json tate_json(const InvolutiveRing& r) {
  return {{"even", group_value_to_json(tate_cohomology(r, 0).value)}, {"odd", group_value_to_json(tate_cohomology(r, 1).value)}};
}

inline bool tate_vanishes(const InvolutiveRing& r) {
  return tate_cohomology(r, 0).value.is_trivial() && tate_cohomology(r, 1).value.is_trivial();
}

/// The conjugation action of F/S on a normal abelian S.
inline GroupAction conjugation_action(const FiniteGroup& f, const Subgroup& s) {
  SubgroupGroup sg = subgroup_as_group(f, s);
  QuotientGroup q = quotient_by(f, s);
  std::map<int, int> index;
  for (std::size_t i = 0; i < sg.embedding.size(); ++i) index[sg.embedding[i]] = int(i);
  GroupAction a;
  a.acting = q.group;
  a.acting_name = describe_group(q.group);
  if (q.group.order() > 1) a.generators = q.group.generators();
  for (int c : a.generators) {
    const int rep = q.section[std::size_t(c)];
    std::vector<int> perm;
    for (int x : sg.embedding) perm.push_back(index.at(f.conj(rep, x)));
    a.permutations.push_back(perm);
  }
  return a;
}

inline Json orders_json(const std::vector<std::size_t>& v) { return Json(v); }

}  // namespace detail

// ---------------------------------------------------------------- vanishing rules

/// 2 a unit in the base: every Nil-L group vanishes.
inline RuleOutcome rule_r15(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom()) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  detail::RuleRun run("R15", ctx);
  run.evidence()["base"] = d.base().name();
  if (!run.check("two_invertible", d.base().two_invertible())) return run.fail_now();
  if (auto r = build_ring(d, ctx.max_rank)) {
    VanishingReport rep = verify_vanishing_2_invertible(*r);
    run.evidence()["tate"] = {{"even", group_value_to_json(rep.even)}, {"odd", group_value_to_json(rep.odd)}};
    run.evidence()["witnesses_checked"] = rep.witnesses_checked;
    run.check("tate_vanishes", rep.vanishes);
  }
  return run.finish(NLTerm::zero());
}

/// Z[zeta_m] with m not a power of 2.
inline RuleOutcome rule_r7(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  if (!d.is_coefficient() || d.base() != BasePID::integers()) return detail::not_matched();
  detail::RuleRun run("R7", ctx);
  run.evidence()["m"] = d.zeta();
  run.evidence()["odd_part"] = detail::odd_part(d.zeta());
  if (!run.check("odd_part_nontrivial", detail::odd_part(d.zeta()) > 1)) return run.fail_now();
  run.check("dedekind", d.dedekind());
  InvolutiveRing r = cyclotomic_ring(d.zeta());
  run.evidence()["tate"] = detail::tate_json(r);
  run.check("tate_vanishes", detail::tate_vanishes(r));
  return run.finish(NLTerm::zero());
}

/// F_2[zeta_d] (tensored with F_2[P], P a 2-group) with d > 1 odd.
inline RuleOutcome rule_r8(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  if (d.kind() != DescriptorKind::Coefficient && d.kind() != DescriptorKind::GroupRing) return detail::not_matched();
  if (d.base() != BasePID::f2() || d.zeta() == 1) return detail::not_matched();
  detail::RuleRun run("R8", ctx);
  run.evidence()["d"] = d.zeta();
  if (!run.check("index_odd", d.zeta() % 2 == 1)) return run.fail_now();
  CyclotomicFactorization f = factor_cyclotomic_mod2(d.zeta());
  run.evidence()["factorization"] = {{"order_of_2", f.order}, {"copies", f.copies}, {"factors", f.factors.size()}};
  run.check("separable_splitting", f.factors.size() == f.copies);
  if (d.has_group()) {
    if (!run.check("group_is_2group", is_power_of_two(d.group().order()))) return run.fail_now();
    run.evidence()["radical_index"] = radical_nilpotency(BasePID::f2(), d.group()).index;
  }
  InvolutiveRing r = cyclotomic_ring(d.zeta(), BasePID::f2());
  run.evidence()["tate"] = detail::tate_json(r);
  run.check("tate_vanishes", detail::tate_vanishes(r));
  return run.finish(NLTerm::zero());
}

namespace detail {

/// Shared pattern of the two rules for Z[zeta_d][P], d odd.
inline RuleOutcome vanish_over_odd_cyclotomic(const std::string& id, bool cyclic, const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced) return not_matched();
  const RingDescriptor& d = t.descriptor();
  if (d.kind() != DescriptorKind::GroupRing || d.base() != BasePID::integers() || d.zeta() % 2 == 0 || d.zeta() == 1)
    return not_matched();
  const FiniteGroup& p = d.group();
  if (!is_power_of_two(p.order()) || !p.is_abelian() || p.is_cyclic(p.whole()) != cyclic) return not_matched();
  RuleRun run(id, ctx);
  run.evidence()["d"] = d.zeta();
  run.evidence()["group"] = d.group_name();
  run.check(cyclic ? "cyclic_2group" : "abelian_noncyclic_2group", true);
  InvolutiveRing r = cyclotomic_ring(d.zeta());
  run.evidence()["tate_coefficients"] = tate_json(r);
  run.check("coefficient_tate_vanishes", tate_vanishes(r));
  return run.finish(NLTerm::zero());
}

}  // namespace detail

inline RuleOutcome rule_r9(const NLTerm& t, RuleContext& ctx) { return detail::vanish_over_odd_cyclotomic("R9", true, t, ctx); }
inline RuleOutcome rule_r17(const NLTerm& t, RuleContext& ctx) { return detail::vanish_over_odd_cyclotomic("R17", false, t, ctx); }

/// Dedekind rings with vanishing Tate cohomology.
inline RuleOutcome rule_r6(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  if (d.kind() == DescriptorKind::Pair) return detail::not_matched();
  detail::RuleRun run("R6", ctx);
  if (!run.check("dedekind", d.dedekind())) return run.fail_now();
  auto r = build_ring(d, ctx.max_rank);
  if (!run.check("constructible", r.has_value())) return run.fail_now();
  run.evidence()["tate"] = detail::tate_json(*r);
  run.check("tate_vanishes", detail::tate_vanishes(*r));
  return run.finish(NLTerm::zero());
}

// ---------------------------------------------------------------- base values

inline NLTerm f2_value(int n) {
  if (n % 2 != 0) return NLTerm::zero();
  return NLTerm::known_group({{"(+)_{d odd} x^d F2"}});
}

inline NLTerm integers_value(int n) {
  switch (((n % 4) + 4) % 4) {
    case 2: return NLTerm::known_group({{"xZ[x]/2"}});
    case 3: return NLTerm::known_group({{"Z[x]/4", "Z[x]/2", "Z[x]/2", "Z[x]/2"}});
    default: return NLTerm::zero();
  }
}

inline RuleOutcome rule_r16(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced || !t.descriptor().is_f2()) return detail::not_matched();
  detail::RuleRun run("R16", ctx);
  run.evidence()["n"] = t.degree;
  run.check("field_f2", true);
  return run.finish(f2_value(t.degree));
}

inline RuleOutcome rule_zbase(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced || !t.descriptor().is_integers()) return detail::not_matched();
  detail::RuleRun run("ZBASE", ctx);
  run.evidence()["n"] = t.degree;
  if (!run.check("decoration_h", t.dec == Decoration::h())) return run.fail_now();
  return run.finish(integers_value(t.degree));
}

// ---------------------------------------------------------------- reductions

/// F_q[P] (x) R -> F_q (x) R for a 2-group P: the augmentation ideal is nilpotent.
inline RuleOutcome rule_r5(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  if (d.kind() != DescriptorKind::GroupRing || !d.base().is_field() || d.base().characteristic_zero()) return detail::not_matched();
  detail::RuleRun run("R5", ctx);
  run.evidence()["group"] = d.group_name();
  if (!run.check("group_is_2group", is_power_of_two(d.group().order()))) return run.fail_now();
  RadicalNilpotency rad = radical_nilpotency(d.base(), d.group());
  run.evidence()["radical_index"] = rad.index;
  run.evidence()["radical_dimensions"] = rad.dimensions;
  run.check("radical_nilpotent", rad.dimensions.back() == 0);
  if (!run.check("decoration_h", t.dec == Decoration::h())) return run.fail_now();
  return run.finish(NLTerm::atom(t.degree, t.dec, RingDescriptor::coefficient(d.base(), d.zeta())));
}

/// Coinvariants under a trivial action.
inline RuleOutcome rule_r2(const NLTerm& t, RuleContext& ctx) {
  if (t.kind != NLTerm::Kind::Coinvariants) return detail::not_matched();
  detail::RuleRun run("R2", ctx);
  run.evidence()["acting"] = t.action->acting_name;
  if (!run.check("action_trivial", t.action->trivial())) return run.fail_now();
  return run.finish(t.children[0]);
}

namespace detail {

inline RuleOutcome sylow_reduction(const std::string& id, bool category_route, const NLTerm& t, RuleContext& ctx,
                                   bool allow_whole) {
  if (!is_z_group_ring(t) || t.descriptor().zeta() != 1) return not_matched();
  const FiniteGroup& f = t.descriptor().group();
  RuleRun run(id, ctx);
  SylowResult syl = sylow2(f);
  run.evidence()["order"] = f.order();
  run.evidence()["sylow2_order"] = syl.subgroup.order();
  if (!allow_whole && !run.check("sylow2_proper", syl.subgroup.order() < f.order())) return run.fail_now();
  bool ok = run.check("sylow2_normal", syl.normal);
  if (!category_route) {
    ok = run.check("sylow2_abelian", syl.abelian) && ok;
  }
  if (f.order() <= ctx.category_order_limit) {
    HyperelementaryCategory cat = hyperelementary_category(f);
    Json objects = Json::array();
    bool all_abelian = true;
    for (const auto& h : cat.objects) {
      const bool ab = f.is_abelian(h);
      all_abelian = all_abelian && ab;
      objects.push_back({{"order", h.order()}, {"abelian", ab}});
    }
    run.evidence()["hyperelementary"] = {{"objects", objects}, {"morphisms", cat.morphisms.size()}};
    if (category_route) ok = run.check("hyperelementary_abelian", all_abelian) && ok;
  } else if (category_route) {
    ok = run.check("hyperelementary_abelian", false) && ok;
  }
  if (!ok) return run.fail_now();
  SubgroupGroup s = subgroup_as_group(f, syl.subgroup);
  GroupAction action = conjugation_action(f, syl.subgroup);
  run.evidence()["acting"] = action.acting_name;
  NLTerm inner = NLTerm::atom(t.degree, t.dec, RingDescriptor::group_ring(BasePID::integers(), 1, s.group));
  return run.finish(NLTerm::coinvariants(inner, std::move(action)));
}

}  // namespace detail

/// Z[F] -> coinvariants of Z[S] for a normal abelian Sylow 2-subgroup S.
inline RuleOutcome rule_r1(const NLTerm& t, RuleContext& ctx, bool allow_whole = false) {
  return detail::sylow_reduction("R1", false, t, ctx, allow_whole);
}

/// The same target, through the category of 2-hyperelementary subgroups.
inline RuleOutcome rule_r4(const NLTerm& t, RuleContext& ctx, bool allow_whole = false) {
  return detail::sylow_reduction("R4", true, t, ctx, allow_whole);
}

/// Z[C_N x P] -> Z[P], N > 1 odd.
inline RuleOutcome rule_r10(const NLTerm& t, RuleContext& ctx) {
  if (!detail::is_z_group_ring(t) || t.descriptor().zeta() != 1) return detail::not_matched();
  const FiniteGroup& h = t.descriptor().group();
  if (!h.is_abelian() || is_power_of_two(h.order())) return detail::not_matched();
  detail::RuleRun run("R10", ctx);
  auto dec = is_2hyperelementary(h);
  if (!run.check("hyperelementary", dec.has_value())) return run.fail_now();
  run.evidence()["n"] = dec->n;
  SubgroupGroup p = subgroup_as_group(h, dec->p);
  run.evidence()["p"] = describe_group(p.group);
  return run.finish(NLTerm::atom(t.degree, t.dec, RingDescriptor::group_ring(BasePID::integers(), 1, p.group)));
}

/// Z[C_N x|_tau P]: split C_N over Z[1/N] into cyclotomic factors.
inline RuleOutcome rule_r11(const NLTerm& t, RuleContext& ctx) {
  if (!detail::is_z_group_ring(t) || t.descriptor().zeta() != 1) return detail::not_matched();
  const FiniteGroup& h = t.descriptor().group();
  if (is_power_of_two(h.order())) return detail::not_matched();
  detail::RuleRun run("R11", ctx);
  auto dec = is_2hyperelementary(h);
  if (!run.check("hyperelementary", dec.has_value())) return run.fail_now();
  const std::uint64_t n = dec->n;
  run.evidence()["n"] = n;
  CrtSplitting crt = crt_split_cyclic(BasePID::localized(n), n);
  run.evidence()["crt"] = {{"divisors", crt.divisors}, {"determinant", crt.determinant.str()}};
  run.check("crt_ring_map", crt.check.ok());
  run.check("crt_bijective", crt.bijective);
  SubgroupGroup p = subgroup_as_group(h, dec->p);
  run.evidence()["p"] = describe_group(p.group);
  run.evidence()["trivial_action"] = dec->trivial_action();
  if (dec->trivial_action()) {
    std::vector<NLTerm> parts;
    for (auto d : crt.divisors)
      parts.push_back(NLTerm::atom(t.degree, t.dec, RingDescriptor::group_ring(BasePID::integers(), d, p.group)));
    return run.finish(NLTerm::sum(std::move(parts)));
  }
  std::vector<long long> tau;
  if (p.group.order() > 1)
    for (int g : p.group.generators()) tau.push_back(dec->tau.at(p.embedding[std::size_t(g)]));
  return run.finish(NLTerm::atom(t.degree, t.dec, RingDescriptor::hyper_twisted(BasePID::localized(n), n, p.group, tau)));
}

namespace detail {

/// Verifies the pullback square of Z[G] at a central K of order 2 and that G/K is as expected.
inline void verify_square_evidence(RuleRun& run, const RuleContext& ctx, const FiniteGroup& g, const Subgroup& k,
                                   const FiniteGroup& expected_quotient) {
  if (g.order() > ctx.square_order_limit) {
    run.evidence()["square"] = "not verified: group order above limit";
    return;
  }
  bool ok = false;
  try {
    CartesianSquare sq = pullback_square(BasePID::integers(), g, k);
    ok = sq.verified_pullback && sq.surjective_to_d;
    run.evidence()["square"] = {{"label", sq.label}, {"rank_b", sq.b->rank()}, {"rank_c", sq.c->rank()}};
  } catch (const Error& e) {
    run.evidence()["square"] = std::string(e.what());
  }
  run.check("pullback_verified", ok);
  run.check("quotient_matches", are_isomorphic(quotient_by(g, k).group, expected_quotient));
}

}  // namespace detail

/// Z[zeta_e][P] for a nontrivial abelian 2-group P: Mayer-Vietoris sequence of the
/// square at K of order 2 inside the largest cyclic factor.
inline RuleOutcome rule_r12(const NLTerm& t, RuleContext& ctx) {
  if (!detail::is_z_group_ring(t)) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  const FiniteGroup& p = d.group();
  if (!is_power_of_two(p.order()) || !p.is_abelian() || !is_power_of_two(d.zeta())) return detail::not_matched();
  detail::RuleRun run("R12", ctx);
  std::vector<std::size_t> inv = abelian_invariants(p);
  std::sort(inv.begin(), inv.end());
  const std::size_t ep = inv.back();
  const std::uint64_t e = d.zeta();
  run.evidence()["invariants"] = inv;
  run.evidence()["zeta"] = e;
  if (!run.check("zeta_covers_exponent", e == 1 || e >= ep)) return run.fail_now();
  std::vector<std::size_t> rest(inv.begin(), inv.end() - 1);
  FiniteGroup p_prime = detail::abelian_from_invariants(rest);
  rest.push_back(ep / 2);
  FiniteGroup p0 = detail::abelian_from_invariants(rest);
  run.evidence()["p0"] = describe_group(p0);
  run.evidence()["p_prime"] = describe_group(p_prime);

  if (e == 1) {
    int gen = 0;
    for (std::size_t x = 0; x < p.order(); ++x)
      if (p.element_order(int(x)) == ep) {
        gen = int(x);
        break;
      }
    Subgroup k = p.closure(std::vector<int>{p.power(gen, static_cast<long long>(ep / 2))});
    detail::verify_square_evidence(run, ctx, p, k, p0);
  } else {
    run.evidence()["square"] = "coefficients contain zeta_" + std::to_string(e) + "; square not built";
  }

  const BasePID z = BasePID::integers(), f2 = BasePID::f2();
  const int n = t.degree;
  NLTerm middle;
  if (e == 1) {
    middle = NLTerm::sum({NLTerm::atom(n, t.dec, RingDescriptor::group_ring(z, 1, p0)),
                          NLTerm::atom(n, t.dec, RingDescriptor::group_ring(z, ep, p_prime))});
  } else {
    NLTerm half = NLTerm::atom(n, t.dec, RingDescriptor::group_ring(z, e, p0));
    middle = NLTerm::sum({half, half});
  }
  std::vector<NLTerm> seq{NLTerm::atom(n + 1, t.dec, RingDescriptor::group_ring(f2, 1, p0)), t, middle,
                          NLTerm::atom(n, t.dec, RingDescriptor::group_ring(f2, 1, p0))};
  return run.finish(NLTerm::extension(std::move(seq), 1,
                                      "exact sequence of the square Z[P] -> Z[P]/Sigma_K, Z[P0] -> F2[P0], |K| = 2"));
}

/// Dihedral, semidihedral and quaternionic 2-groups: square at the center.
inline RuleOutcome rule_r13(const NLTerm& t, RuleContext& ctx) {
  if (!detail::is_z_group_ring(t) || t.descriptor().zeta() != 1) return detail::not_matched();
  const FiniteGroup& g = t.descriptor().group();
  const std::size_t order = g.order();
  if (!is_power_of_two(order) || order < 8 || order > 128 || g.is_abelian()) return detail::not_matched();
  const unsigned e = log2_of(order);
  Twist twist = Twist::None;
  std::string family;
  if (are_isomorphic(g, dihedral_group(e))) {
    twist = Twist::Conjugation;
    family = "dihedral";
  } else if (e >= 4 && are_isomorphic(g, semidihedral_group(e))) {
    twist = Twist::NegativeConjugation;
    family = "semidihedral";
  } else if (are_isomorphic(g, quaternionic_group(e))) {
    twist = Twist::Quaternionic;
    family = "quaternionic";
  } else {
    return detail::not_matched();
  }
  detail::RuleRun run("R13", ctx);
  run.evidence()["family"] = family;
  run.evidence()["e"] = e;
  Subgroup k = g.center();
  run.check("center_order_2", k.order() == 2);
  FiniteGroup quotient = dihedral_group(e - 1);
  detail::verify_square_evidence(run, ctx, g, k, quotient);
  const BasePID z = BasePID::integers(), f2 = BasePID::f2();
  const int n = t.degree;
  NLTerm middle = NLTerm::sum({NLTerm::atom(n, t.dec, RingDescriptor::group_ring(z, 1, quotient)),
                               NLTerm::atom(n, t.dec, RingDescriptor::twisted(std::uint64_t{1} << (e - 1), twist))});
  std::vector<NLTerm> seq{NLTerm::atom(n + 1, t.dec, RingDescriptor::group_ring(f2, 1, quotient)), t, middle,
                          NLTerm::atom(n, t.dec, RingDescriptor::group_ring(f2, 1, quotient))};
  return run.finish(NLTerm::extension(
      std::move(seq), 1, "exact sequence of the square Z[G] -> Z[G]/Sigma_K, Z[G/K] -> F2[G/K] at the center K"));
}

/// Z[zeta] o C2 over its central real subring.
inline RuleOutcome rule_r14(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced || t.descriptor().kind() != DescriptorKind::Twisted) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  const std::uint64_t m = d.zeta();
  const bool quaternionic = d.twist() == Twist::Quaternionic;
  const int sign = d.twist() == Twist::NegativeConjugation ? -1 : 1;
  detail::RuleRun run("R14", ctx);
  run.evidence()["m"] = m;
  if (!run.check("root_order_large_enough", m >= (quaternionic ? 8u : 16u))) return run.fail_now();
  if (2 * euler_phi(m) <= ctx.max_rank) {
    auto r = build_ring(d, ctx.max_rank);
    // zeta is the second basis vector of Z[zeta]; its conjugate comes from the involution of Z[zeta]
    InvolutiveRing z = cyclotomic_ring(m);
    Vec zeta = z.basis(1);
    Vec o = add(zeta, scale(Scalar(sign), z.involution().apply(zeta)));
    Vec in_r = r->zero();
    for (std::size_t i = 0; i < o.size(); ++i) in_r[i] = o[i];
    run.check("real_element_central", r->is_central(in_r));
  } else {
    run.evidence()["central_check"] = "not computed: rank above limit";
  }
  RingDescriptor o = RingDescriptor::real_subring(m, sign);
  return run.finish(NLTerm::sum({NLTerm::atom(t.degree, t.dec, o), NLTerm::atom(t.degree, t.dec, RingDescriptor::pair(o, d))}));
}

/// Manual only: NL(R[G]) = NL(R) + reduced part.
inline RuleOutcome rule_r3(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.reduced || t.descriptor().kind() != DescriptorKind::GroupRing) return detail::not_matched();
  const RingDescriptor& d = t.descriptor();
  detail::RuleRun run("R3", ctx);
  run.check("augmentation_split", true);
  NLTerm reduced = t;
  reduced.reduced = true;
  return run.finish(NLTerm::sum({NLTerm::atom(t.degree, t.dec, RingDescriptor::coefficient(d.base(), d.zeta())), reduced}));
}

/// Decoration change ultimate -> h ahead of a rule proved at decoration h.
inline RuleOutcome rule_dec(const NLTerm& t, RuleContext& ctx) {
  if (!t.is_atom() || t.dec != Decoration::ultimate()) return detail::not_matched();
  detail::RuleRun run("DEC", ctx);
  run.check("from_ultimate", true);
  NLTerm out = t;
  out.dec = Decoration::h();
  return run.finish(out);
}

// ---------------------------------------------------------------- registry

struct RuleInfo {
  std::string id;
  std::string cite;
  bool native_h = false;
  bool automatic = true;
  std::function<RuleOutcome(const NLTerm&, RuleContext&)> apply;
};

/// Rules in automatic priority order, followed by the manual ones.
inline const std::vector<RuleInfo>& rule_registry() {
  static const std::vector<RuleInfo> rules = {
      {"R15", "if 2 is a unit in the ground ring then all Nil-L groups vanish", false, true, rule_r15},
      {"R7", "Z[zeta_m] with m not a power of 2 has vanishing Tate cohomology and hence vanishing Nil-L groups", true, true,
       rule_r7},
      {"R8", "F2 (x) Z[zeta_d] for odd d > 1 is a product of fields permuted freely or acted on nontrivially; "
             "after nilpotent reduction of a 2-group ring its Nil-L groups vanish",
       false, true, rule_r8},
      {"R9", "Z[zeta_d][C] vanishes for C a cyclic 2-group and d > 1 odd", false, true, rule_r9},
      {"R17", "Z[zeta_d][P] vanishes for P an abelian 2-group and d > 1 odd, by induction over cyclic factors", false, true,
       rule_r17},
      {"R6", "a Dedekind ring whose Tate cohomology vanishes has vanishing Nil-L groups", true, true, rule_r6},
      {"R16", "Nil-L of F2 with trivial involution vanishes in odd degrees and is a sum of odd powers of x in even degrees",
       false, true, rule_r16},
      {"ZBASE", "the known values of UNil^h of the integers: 0, 0, xZ[x]/2, Z[x]/4 + Z[x]/2^3 in degrees 0..3", true, true,
       rule_zbase},
      {"R5", "a nilpotent ideal can be divided out: F_q[P] and F_q have isomorphic Nil-L groups for a 2-group P", true,
       true, rule_r5},
      {"R2", "coinvariants under a trivial action are the module itself", false, true, rule_r2},
      {"R1", "Nil-L of Z[F] is the F/S-coinvariants of Nil-L of Z[S] for a normal abelian Sylow 2-subgroup S", false,
       true, [](const NLTerm& t, RuleContext& c) { return rule_r1(t, c, false); }},
      {"R4", "Nil-L of Z[F] is detected on 2-hyperelementary subgroups; when these are abelian it is the coinvariants of "
             "Z[S] for the normal Sylow 2-subgroup S",
       false, true, [](const NLTerm& t, RuleContext& c) { return rule_r4(t, c, false); }},
      {"R10", "for abelian C_N x P with N odd, Nil-L of Z[C_N x P] equals Nil-L of Z[P]", false, true, rule_r10},
      {"R11", "after inverting N, Z[C_N] splits as the product of Z[1/N][zeta_d] over d | N", false, true, rule_r11},
      {"R12", "for an abelian 2-group the pullback at a central subgroup of order 2 yields a Mayer-Vietoris sequence", false,
       true, rule_r12},
      {"R13", "for dihedral, semidihedral and quaternionic 2-groups the pullback at the center yields a Mayer-Vietoris "
              "sequence with a twisted cyclotomic term",
       false, true, rule_r13},
      {"R14", "the twisted cyclotomic ring is an algebra over its central real subring O and Nil-L splits into Nil-L of O "
              "and a relative term",
       false, true, rule_r14},
      {"R3", "the augmentation splits Nil-L of R[G] as Nil-L of R plus a reduced part", false, false, rule_r3},
      {"DEC", "results proved at decoration h transfer to the ultimate decoration through polynomial extensions", false,
       false, rule_dec},
  };
  return rules;
}

inline const RuleInfo& find_rule(const std::string& id) {
  for (const auto& r : rule_registry())
    if (r.id == id) return r;
  fail(ErrorCode::InvalidArgument, "unknown rule '" + id + "'");
}

/// Runs a rule with memoization keyed by rule id and subterm.
inline RuleOutcome run_rule(const RuleInfo& rule, const NLTerm& t, RuleContext& ctx) {
  if (!ctx.memoizing()) return rule.apply(t, ctx);
  const std::string key = rule.id + "|" + t.to_json().dump();
  auto it = ctx.memo().find(key);
  if (it != ctx.memo().end()) return it->second;
  RuleOutcome out = rule.apply(t, ctx);
  ctx.memo().emplace(key, out);
  return out;
}

}  // namespace unil
