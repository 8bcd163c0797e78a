#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unil/engine/rules.hpp"

namespace unil {

struct ReductionStep {
  std::string rule;
  std::string status = "applied";  // or "hypothesis_failed"
  TermPath path;
  NLTerm before, after;
  Json evidence;

  Json to_json() const {
    return {{"rule", rule},
            {"status", status},
            {"cite", find_rule(rule).cite},
            {"path", path},
            {"before", before.to_json()},
            {"after", after.to_json()},
            {"evidence", evidence}};
  }

  static ReductionStep from_json(const Json& j) {
    ReductionStep s;
    s.rule = j.at("rule").get<std::string>();
    s.status = j.value("status", std::string("applied"));
    s.path = j.at("path").get<TermPath>();
    s.before = NLTerm::from_json(j.at("before"));
    s.after = NLTerm::from_json(j.at("after"));
    s.evidence = j.at("evidence");
    return s;
  }
};

struct Certificate {
  std::string kind = "normalize";  // or "reduce"
  NLTerm input;
  long long n = 0;
  std::optional<FiniteGroup> group;
  std::vector<ReductionStep> steps;
  NLTerm final_term;
  std::string outcome = "normal_form";  // or "hypothesis_failed"

  Json to_json() const {
    Json steps_json = Json::array();
    for (const auto& s : steps) steps_json.push_back(s.to_json());
    Json j = {{"kind", kind},
              {"input", input.to_json()},
              {"n", n},
              {"steps", steps_json},
              {"final", final_term.to_json()},
              {"outcome", outcome}};
    if (group) {
      j["group"] = group_to_json(*group);
      j["group"]["name"] = describe_group(*group);
    }
    return j;
  }

  static Certificate from_json(const Json& j) {
    require(j.is_object(), ErrorCode::ParseError, "certificate must be an object");
    for (const char* key : {"kind", "input", "n", "steps", "final", "outcome"})
      require(j.contains(key), ErrorCode::ParseError, std::string("certificate is missing '") + key + "'");
    Certificate c;
    c.kind = j.at("kind").get<std::string>();
    c.input = NLTerm::from_json(j.at("input"));
    c.n = j.at("n").get<long long>();
    if (j.contains("group")) c.group = group_from_json(j.at("group"));
    for (const auto& s : j.at("steps")) c.steps.push_back(ReductionStep::from_json(s));
    c.final_term = NLTerm::from_json(j.at("final"));
    c.outcome = j.at("outcome").get<std::string>();
    return c;
  }

  std::string dump() const { return to_json().dump(); }
};

namespace detail {

inline ReductionStep make_step(const std::string& rule, const TermPath& path, const NLTerm& before, const RuleOutcome& out) {
  ReductionStep s;
  s.rule = rule;
  s.path = path;
  s.before = before;
  s.after = out.after;
  s.evidence = out.evidence;
  return s;
}

/// Tries every automatic rule at one position; appends the steps and returns the rewritten term.
inline std::optional<NLTerm> rewrite_at(const NLTerm& term, const TermPath& path, RuleContext& ctx,
                                        std::vector<ReductionStep>& steps) {
  const NLTerm& sub = subterm(term, path);
  for (const auto& rule : rule_registry()) {
    if (!rule.automatic) continue;
    if (rule.native_h && sub.is_atom() && sub.dec == Decoration::ultimate()) {
      RuleOutcome dec = run_rule(find_rule("DEC"), sub, ctx);
      if (!dec.applied()) continue;
      RuleOutcome out = run_rule(rule, dec.after, ctx);
      if (!out.applied()) continue;
      steps.push_back(make_step("DEC", path, sub, dec));
      steps.push_back(make_step(rule.id, path, dec.after, out));
      return canonicalize(replace_subterm(term, path, out.after));
    }
    RuleOutcome out = run_rule(rule, sub, ctx);
    if (!out.applied()) continue;
    steps.push_back(make_step(rule.id, path, sub, out));
    return canonicalize(replace_subterm(term, path, out.after));
  }
  return std::nullopt;
}

}  // namespace detail

/// Rewrites to normal form: the first applicable rule at the first position in pre-order.
inline NLTerm normalize(const NLTerm& start, RuleContext& ctx, std::vector<ReductionStep>& steps,
                        std::size_t max_steps = 10000) {
  NLTerm cur = canonicalize(start);
  for (std::size_t k = 0; k < max_steps; ++k) {
    bool progressed = false;
    for (const auto& path : rewritable_positions(cur)) {
      if (auto next = detail::rewrite_at(cur, path, ctx, steps)) {
        cur = std::move(*next);
        progressed = true;
        break;
      }
    }
    if (!progressed) return cur;
  }
  fail(ErrorCode::VerificationFailed, "rewriting did not terminate");
}

inline Certificate normalize_certificate(const NLTerm& start, RuleContext& ctx) {
  Certificate c;
  c.input = canonicalize(start);
  c.n = start.is_atom() ? start.degree : 0;
  c.final_term = normalize(c.input, ctx, c.steps);
  return c;
}

/// NL_n(Z[F]) at the ultimate decoration. The Sylow step is forced first; when its
/// hypothesis fails the certificate stops with the failing predicate.
inline Certificate reduce(const FiniteGroup& f, long long n, RuleContext& ctx) {
  require(f.order() <= max_group_order(), ErrorCode::OrderTooLarge, "group order exceeds the configured maximum");
  Certificate c;
  c.kind = "reduce";
  c.n = n;
  c.group = f;
  c.input = NLTerm::atom(n, Decoration::ultimate(), RingDescriptor::group_ring(BasePID::integers(), 1, f));
  NLTerm cur = c.input;
  if (f.order() > 1) {
    RuleOutcome first = rule_r1(cur, ctx, true);
    ReductionStep s = detail::make_step("R1", {}, cur, first);
    if (!first.applied()) {
      s.status = "hypothesis_failed";
      s.after = cur;
      c.steps.push_back(s);
      c.final_term = cur;
      c.outcome = "hypothesis_failed";
      return c;
    }
    c.steps.push_back(s);
    cur = first.after;
  }
  c.final_term = normalize(cur, ctx, c.steps);
  return c;
}

inline Certificate reduce(const FiniteGroup& f, long long n) {
  RuleContext ctx;
  return reduce(f, n, ctx);
}

/// Applies one named rule at a position. Rules proved at decoration h get a DEC step first.
inline std::pair<NLTerm, std::vector<ReductionStep>> apply_rule(const NLTerm& term, const std::string& rule_id,
                                                                const TermPath& path, RuleContext& ctx) {
  const RuleInfo& rule = find_rule(rule_id);
  const NLTerm& sub = subterm(term, path);
  std::vector<ReductionStep> steps;
  NLTerm target = sub;
  if (rule.native_h && sub.is_atom() && sub.dec == Decoration::ultimate()) {
    RuleOutcome dec = run_rule(find_rule("DEC"), sub, ctx);
    steps.push_back(detail::make_step("DEC", path, sub, dec));
    target = dec.after;
  }
  RuleOutcome out = rule_id == "R1"   ? rule_r1(target, ctx, true)
                    : rule_id == "R4" ? rule_r4(target, ctx, true)
                                      : run_rule(rule, target, ctx);
  if (out.status == RuleOutcome::Status::NotMatched)
    fail(ErrorCode::RuleNotApplicable, "rule " + rule_id + " does not match " + target.str());
  if (out.status == RuleOutcome::Status::ConditionFailed)
    fail(ErrorCode::SideConditionFailed, "rule " + rule_id + " side condition failed: " + out.evidence["failed"].dump());
  steps.push_back(detail::make_step(rule_id, path, target, out));
  return {canonicalize(replace_subterm(term, path, out.after)), steps};
}

inline std::pair<NLTerm, std::vector<ReductionStep>> apply_rule(const NLTerm& term, const std::string& rule_id,
                                                                const TermPath& path = {}) {
  RuleContext ctx;
  return apply_rule(term, rule_id, path, ctx);
}

/// Known values for the base rings Z (decoration h) and F2.
inline NLTerm base_value(long long n, const RingDescriptor& d) {
  const int k = int(((n % 4) + 4) % 4);
  if (d.is_integers()) return integers_value(k);
  if (d.is_f2()) return f2_value(k);
  fail(ErrorCode::Unsupported, "no tabulated value for " + d.name());
}

// ---------------------------------------------------------------- splitting

struct SplittingDecision {
  long long n = 0, m = 0;
  std::string decision;  // "splittable" or "infinite_counterexamples"
  Json to_json() const { return {{"n", n}, {"m", m}, {"decision", decision}}; }
};

inline SplittingDecision splitting_decision(long long n, long long m) {
  require(n >= 0 && m >= 0, ErrorCode::InvalidArgument, "dimensions must be nonnegative");
  require(n + m > 5, ErrorCode::DimensionTooSmall, "n + m must exceed 5");
  const long long r = (n + m) % 4;
  const bool split = (m % 2 == 1) ? (r == 0 || r == 3) : (r == 1 || r == 2);
  return {n, m, split ? "splittable" : "infinite_counterexamples"};
}

// ---------------------------------------------------------------- replay

struct ReplayReport {
  bool ok = true;
  std::optional<std::size_t> divergent_step;  // step index; steps.size() denotes the final term
  std::string message;

  Json to_json() const {
    Json j = {{"ok", ok}, {"message", message}};
    j["divergent_step"] = divergent_step ? Json(*divergent_step) : Json(nullptr);
    return j;
  }
};

/// Re-executes every recorded step from the input and compares terms and evidence.
inline ReplayReport replay(const Certificate& c, RuleContext& ctx) {
  ReplayReport rep;
  auto diverge = [&](std::size_t i, std::string msg) {
    rep.ok = false;
    rep.divergent_step = i;
    rep.message = std::move(msg);
    return rep;
  };
  NLTerm cur = c.kind == "reduce" ? c.input : canonicalize(c.input);
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const ReductionStep& s = c.steps[i];
    const NLTerm* sub = nullptr;
    try {
      sub = &subterm(cur, s.path);
    } catch (const Error&) {
      return diverge(i, "path does not exist");
    }
    if (*sub != s.before) return diverge(i, "recorded 'before' does not match the term at the path");
    const RuleInfo* rule = nullptr;
    try {
      rule = &find_rule(s.rule);
    } catch (const Error&) {
      return diverge(i, "unknown rule " + s.rule);
    }
    const bool forced = c.kind == "reduce" && i == 0 && s.rule == "R1";
    RuleOutcome out = forced ? rule_r1(*sub, ctx, true) : run_rule(*rule, *sub, ctx);
    if (s.status == "hypothesis_failed") {
      if (out.applied() || !forced) return diverge(i, "hypothesis was recorded as failing but holds");
      if (out.evidence != s.evidence) return diverge(i, "evidence differs");
      if (i + 1 != c.steps.size()) return diverge(i + 1, "steps after a failed hypothesis");
      break;
    }
    if (!out.applied()) return diverge(i, "rule " + s.rule + " does not apply");
    if (out.evidence != s.evidence) return diverge(i, "evidence differs");
    if (out.after != s.after) return diverge(i, "recorded 'after' differs from the recomputed result");
    cur = forced ? out.after : canonicalize(replace_subterm(cur, s.path, out.after));
  }
  if (cur != c.final_term) return diverge(c.steps.size(), "final term differs from the replayed result");
  if (c.kind == "reduce") {
    require(c.group.has_value(), ErrorCode::ParseError, "reduce certificate without a group");
    Certificate again = reduce(*c.group, c.n, ctx);
    if (again.dump() != c.dump()) return diverge(c.steps.size(), "regenerated certificate is not byte-identical");
  }
  rep.message = "verified " + std::to_string(c.steps.size()) + " steps";
  return rep;
}

inline ReplayReport replay(const Certificate& c) {
  RuleContext ctx;
  return replay(c, ctx);
}

}  // namespace unil
