#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "support/testkit.hpp"
#include "unil/engine/engine.hpp"

using namespace unil;

namespace {

// values of UNil^h_n(Z) for n mod 4, written out by hand
const std::array<std::string, 4> kIntegerValues = {"0", "0", "xZ[x]/2", "Z[x]/4 + Z[x]/2 + Z[x]/2 + Z[x]/2"};

NLTerm z_atom(long long n, std::uint64_t m, Decoration dec = Decoration::h()) {
  return NLTerm::atom(n, dec, RingDescriptor::coefficient(BasePID::integers(), m));
}

std::optional<ErrorCode> code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

Json without_n(Json j) {
  j.erase("n");
  for (auto& s : j["steps"]) {
    s["before"].erase("n");
    s["after"].erase("n");
  }
  return j;
}

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  std::string cmd = std::string(UNIL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t k = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), k);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace

TEST(Reduce, OddOrderGroupsGiveIntegerValues) {
  for (const auto& [label, g] : testkit::odd_order_corpus()) {
    for (long long n = 0; n < 4; ++n) {
      Certificate c = reduce(g, n);
      ASSERT_EQ(c.outcome, "normal_form") << label;
      EXPECT_EQ(c.final_term.str(), kIntegerValues[std::size_t(n)]) << label << " n=" << n;
      EXPECT_EQ(c.final_term, integers_value(int(n))) << label;
    }
  }
}

TEST(Reduce, AlternatingGroupFirstStep) {
  Certificate c = reduce(alternating_group(4), 1);
  ASSERT_FALSE(c.steps.empty());
  const ReductionStep& s = c.steps.front();
  EXPECT_EQ(s.rule, "R1");
  ASSERT_EQ(s.after.kind, NLTerm::Kind::Coinvariants);
  const NLTerm& inner = s.after.children.at(0);
  ASSERT_TRUE(inner.is_atom());
  EXPECT_TRUE(are_isomorphic(inner.descriptor().group(), direct_product(cyclic_group(2), cyclic_group(2))));
  const GroupAction& a = *s.after.action;
  EXPECT_EQ(a.acting.order(), 3u);
  ASSERT_EQ(a.permutations.size(), 1u);
  // one fixed point (the identity) and a 3-cycle on the involutions
  const auto& p = a.permutations[0];
  int fixed = 0;
  for (std::size_t i = 0; i < p.size(); ++i) fixed += p[i] == int(i);
  EXPECT_EQ(fixed, 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != int(i)) {
      EXPECT_EQ(p[std::size_t(p[std::size_t(p[i])])], int(i));
    }
  }
  EXPECT_TRUE(replay(c).ok);
}

TEST(Reduce, SymmetricGroupFailsSylowHypothesis) {
  Certificate c = reduce(symmetric_group(3), 0);
  EXPECT_EQ(c.outcome, "hypothesis_failed");
  ASSERT_EQ(c.steps.size(), 1u);
  EXPECT_EQ(c.steps[0].status, "hypothesis_failed");
  const Json& failed = c.steps[0].evidence.at("failed");
  EXPECT_NE(std::find(failed.begin(), failed.end(), Json("sylow2_normal")), failed.end());
  EXPECT_TRUE(replay(c).ok);
}

TEST(Reduce, DeterministicAndPeriodic) {
  FiniteGroup g = parse_group("C_3 x C_3");
  EXPECT_EQ(reduce(g, 2).dump(), reduce(g, 2).dump());
  for (long long n = 0; n < 4; ++n)
    EXPECT_EQ(without_n(reduce(g, n).to_json()), without_n(reduce(g, n + 4).to_json())) << n;
}

TEST(Rules, CyclotomicWithOddPartVanishes) {
  auto [t, steps] = apply_rule(z_atom(1, 12), "R7");
  EXPECT_TRUE(t.is_zero());
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_TRUE(steps[0].evidence.contains("tate"));
  EXPECT_EQ(steps[0].evidence["tate"]["even"], group_value_to_json(FgAbelianGroup::free(0)));
}

TEST(Rules, SideConditionsAndMismatch) {
  EXPECT_EQ(code_of([] { apply_rule(z_atom(0, 8), "R7"); }), ErrorCode::SideConditionFailed);
  EXPECT_EQ(code_of([] { apply_rule(z_atom(0, 8), "R6"); }), ErrorCode::SideConditionFailed);
  EXPECT_EQ(code_of([] { apply_rule(z_atom(0, 3), "R13"); }), ErrorCode::RuleNotApplicable);
  EXPECT_EQ(code_of([] { apply_rule(NLTerm::zero(), "R7"); }), ErrorCode::RuleNotApplicable);
}

TEST(Rules, UltimateDecorationGetsDecStep) {
  auto [t, steps] = apply_rule(z_atom(2, 1, Decoration::ultimate()), "ZBASE");
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_EQ(steps[0].rule, "DEC");
  EXPECT_EQ(t.str(), "xZ[x]/2");
}

TEST(Rules, TwistedRingSplitsOverRealSubring) {
  NLTerm t = NLTerm::atom(0, Decoration::h(), RingDescriptor::twisted(16, Twist::Conjugation));
  auto [out, steps] = apply_rule(t, "R14");
  ASSERT_EQ(out.kind, NLTerm::Kind::Sum);
  EXPECT_EQ(out.children.size(), 2u);
  EXPECT_EQ(code_of([] { apply_rule(NLTerm::atom(0, Decoration::h(), RingDescriptor::twisted(8, Twist::Conjugation)), "R14"); }),
            ErrorCode::SideConditionFailed);
}

TEST(Rules, QuaternionNormalizesThroughSquare) {
  NLTerm t = NLTerm::atom(1, Decoration::h(), RingDescriptor::group_ring(BasePID::integers(), 1, quaternionic_group(3)));
  RuleContext ctx;
  Certificate c = normalize_certificate(t, ctx);
  ASSERT_FALSE(c.steps.empty());
  EXPECT_EQ(c.steps[0].rule, "R13");
  EXPECT_EQ(c.steps[0].after.kind, NLTerm::Kind::Extension);
  EXPECT_TRUE(replay(c).ok);
}

TEST(Terms, CanonicalizeAndJson) {
  NLTerm s = canonicalize(NLTerm::sum({NLTerm::zero(), NLTerm::sum({z_atom(0, 3), z_atom(0, 5)})}));
  ASSERT_EQ(s.kind, NLTerm::Kind::Sum);
  EXPECT_EQ(s.children.size(), 2u);
  EXPECT_EQ(NLTerm::from_json(s.to_json()), s);
  EXPECT_TRUE(canonicalize(NLTerm::sum({NLTerm::zero()})).is_zero());
  EXPECT_EQ(z_atom(3, 1).str(), "NL_3^h(Z)");
}

TEST(Certificates, JsonRoundTrip) {
  Certificate c = reduce(alternating_group(4), 3);
  Certificate back = Certificate::from_json(Json::parse(c.dump()));
  EXPECT_EQ(back.dump(), c.dump());
  EXPECT_TRUE(replay(back).ok);
  EXPECT_EQ(code_of([] { Certificate::from_json(Json::object()); }), ErrorCode::ParseError);
}

TEST(Certificates, TamperedFinalTermIsCaught) {
  Certificate c = reduce(cyclic_group(3), 3);
  c.final_term = NLTerm::zero();
  ReplayReport r = replay(c);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.divergent_step, c.steps.size());
}

TEST(Certificates, TamperedEvidenceIsCaught) {
  Certificate c = reduce(cyclic_group(15), 2);
  ASSERT_GE(c.steps.size(), 3u);
  c.steps[2].evidence["forged"] = true;
  ReplayReport r = replay(c);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.divergent_step, std::optional<std::size_t>(2));
}

TEST(FaultInjection, FlippedSylowConditionStopsReduction) {
  RuleContext ctx;
  ctx.oracle = [](const std::string& rule, const std::string& cond, bool computed) {
    return (rule == "R1" && cond == "sylow2_normal") ? !computed : computed;
  };
  Certificate c = reduce(alternating_group(4), 0, ctx);
  EXPECT_EQ(c.outcome, "hypothesis_failed");
  // an honest replay refuses the forged failure
  ReplayReport r = replay(c);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.divergent_step, std::optional<std::size_t>(0));
}

TEST(FaultInjection, FlippedBaseConditionLeavesAtom) {
  RuleContext ctx;
  ctx.oracle = [](const std::string& rule, const std::string& cond, bool computed) {
    return (rule == "ZBASE" && cond == "decoration_h") ? false : computed;
  };
  Certificate c = reduce(cyclic_group(3), 2, ctx);
  EXPECT_NE(c.final_term, integers_value(2));
  EXPECT_FALSE(replay(c).ok);
  // replaying an honest certificate under the faulty oracle also diverges
  Certificate honest = reduce(cyclic_group(3), 2);
  RuleContext bad = ctx;
  EXPECT_FALSE(replay(honest, bad).ok);
}

TEST(BaseValues, IntegersAndF2) {
  for (long long n = -4; n < 8; ++n)
    EXPECT_EQ(base_value(n, RingDescriptor::coefficient(BasePID::integers(), 1)).str(),
              kIntegerValues[std::size_t(((n % 4) + 4) % 4)]);
  EXPECT_TRUE(base_value(1, RingDescriptor::coefficient(BasePID::f2(), 1)).is_zero());
  EXPECT_FALSE(base_value(2, RingDescriptor::coefficient(BasePID::f2(), 1)).is_zero());
  EXPECT_EQ(code_of([] { base_value(0, RingDescriptor::coefficient(BasePID::integers(), 3)); }), ErrorCode::Unsupported);
}

TEST(Splitting, MatchesCongruenceTable) {
  // rows: m even, m odd; columns: (n + m) mod 4
  const bool table[2][4] = {{false, true, true, false}, {true, false, false, true}};
  for (long long n = 0; n <= 14; ++n)
    for (long long m = 0; m <= 14; ++m) {
      if (n + m <= 5) {
        EXPECT_EQ(code_of([=] { splitting_decision(n, m); }), ErrorCode::DimensionTooSmall);
        continue;
      }
      const bool expect = table[m % 2][(n + m) % 4];
      EXPECT_EQ(splitting_decision(n, m).decision, expect ? "splittable" : "infinite_counterexamples") << n << "," << m;
    }
}

TEST(Cli, ExitCodesAndJson) {
  CliResult t = run_cli("tate --ring Z --j 0");
  ASSERT_EQ(t.status, 0);
  EXPECT_EQ(group_value_from_json(Json::parse(t.out)), FgAbelianGroup::elementary(1, Integer(2)));

  CliResult s = run_cli("split-obstruction --n 4 --m 3");
  ASSERT_EQ(s.status, 0);
  EXPECT_EQ(Json::parse(s.out)["decision"], "splittable");

  EXPECT_EQ(Json::parse(run_cli("split-obstruction --n 1 --m 6").out)["decision"], "infinite_counterexamples");
  EXPECT_EQ(Json::parse(run_cli("tate --ring 'Z[zeta_3]' --j 0").out), Json::parse(R"({"free_rank":0,"torsion":[]})"));
  EXPECT_EQ(Json::parse(run_cli("reduce --group S_3 --n 0").out)["outcome"], "hypothesis_failed");

  CliResult small = run_cli("split-obstruction --n 1 --m 1");
  EXPECT_EQ(small.status, 1);
  EXPECT_EQ(Json::parse(small.out)["error"], "DimensionTooSmall");

  CliResult c = run_cli("classify-2group --group Q_16");
  ASSERT_EQ(c.status, 0);
  EXPECT_EQ(Json::parse(c.out)["kind"], "quaternionic");

  EXPECT_EQ(run_cli("no-such-verb").status, 2);
  EXPECT_EQ(run_cli("reduce --group 'C_4 y'").status, 2);
}

TEST(Cli, ReduceThenReplay) {
  CliResult r = run_cli("reduce --group A_4 --n 2");
  ASSERT_EQ(r.status, 0);
  const std::string path = testing::TempDir() + "unil_cert.json";
  {
    std::ofstream f(path);
    f << r.out;
  }
  CliResult v = run_cli("replay --cert " + path);
  ASSERT_EQ(v.status, 0);
  EXPECT_EQ(Json::parse(v.out)["ok"], true);
  std::remove(path.c_str());
}
