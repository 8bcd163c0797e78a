#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/groups/analysis.hpp"
#include "unil/groups/finite_group.hpp"
#include "unil/io/json.hpp"
#include "unil/rings/constructions.hpp"

namespace unil {

// ---------------------------------------------------------------- decorations

/// s, h, p, <i> for i <= 1, and the limit <-infinity> ("ultimate").
/// <1> is h and <0> is p.
struct Decoration {
  enum class Tag { S, H, P, Angle, Ultimate };
  Tag tag = Tag::Ultimate;
  int angle = 0;

  static Decoration s() { return {Tag::S, 0}; }
  static Decoration h() { return {Tag::H, 0}; }
  static Decoration p() { return {Tag::P, 0}; }
  static Decoration ultimate() { return {Tag::Ultimate, 0}; }
  static Decoration at(int i) {
    require(i <= 1, ErrorCode::InvalidArgument, "decoration <i> needs i <= 1");
    if (i == 1) return h();
    if (i == 0) return p();
    return {Tag::Angle, i};
  }

  std::string str() const {
    switch (tag) {
      case Tag::S: return "s";
      case Tag::H: return "h";
      case Tag::P: return "p";
      case Tag::Angle: return "<" + std::to_string(angle) + ">";
      case Tag::Ultimate: return "ultimate";
    }
    return "?";
  }

  static Decoration parse(const std::string& text) {
    if (text == "s") return s();
    if (text == "h") return h();
    if (text == "p") return p();
    if (text == "ultimate" || text == "<-inf>") return ultimate();
    if (text.size() > 2 && text.front() == '<' && text.back() == '>') {
      try {
        return at(std::stoi(text.substr(1, text.size() - 2)));
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
      }
    }
    fail(ErrorCode::ParseError, "unknown decoration '" + text + "'");
  }

  friend bool operator==(const Decoration& a, const Decoration& b) { return a.tag == b.tag && a.angle == b.angle; }
  friend bool operator!=(const Decoration& a, const Decoration& b) { return !(a == b); }
};

// ---------------------------------------------------------------- ring descriptors

enum class DescriptorKind { Coefficient, GroupRing, Twisted, RealSubring, Pair, HyperTwisted };
enum class Twist { None, Conjugation, NegativeConjugation, Quaternionic };

inline std::string twist_suffix(Twist t) {
  switch (t) {
    case Twist::Conjugation: return "o_c C2";
    case Twist::NegativeConjugation: return "o_-c C2";
    case Twist::Quaternionic: return "o_c [i]";
    case Twist::None: return "";
  }
  return "";
}

inline Twist twist_from_string(const std::string& s) {
  if (s == "c") return Twist::Conjugation;
  if (s == "-c") return Twist::NegativeConjugation;
  if (s == "c_i") return Twist::Quaternionic;
  fail(ErrorCode::ParseError, "unknown twist '" + s + "'");
}

inline std::string twist_code(Twist t) {
  switch (t) {
    case Twist::Conjugation: return "c";
    case Twist::NegativeConjugation: return "-c";
    case Twist::Quaternionic: return "c_i";
    case Twist::None: return "none";
  }
  return "none";
}

/// Z[zeta_{2d}] = Z[zeta_d] for d odd.
inline std::uint64_t canonical_zeta(std::uint64_t m) {
  require(m >= 1, ErrorCode::InvalidArgument, "cyclotomic index must be positive");
  return m % 4 == 2 ? m / 2 : m;
}

/// Symbolic name of a ring with involution. Only the named constructors set
/// the Dedekind flag: Z[zeta_m], F2 and the real subrings Z[zeta +- zeta^-1].
class RingDescriptor {
 public:
  static RingDescriptor coefficient(const BasePID& base, std::uint64_t m = 1) {
    RingDescriptor d;
    d.kind_ = DescriptorKind::Coefficient;
    d.base_ = base;
    d.zeta_ = canonical_zeta(m);
    d.dedekind_ = (base == BasePID::integers()) || (base == BasePID::f2() && d.zeta_ == 1);
    return d;
  }

  /// base[zeta_m][G]; the trivial group collapses to the coefficient ring.
  static RingDescriptor group_ring(const BasePID& base, std::uint64_t m, const FiniteGroup& g) {
    if (g.order() == 1) return coefficient(base, m);
    RingDescriptor d = coefficient(base, m);
    d.kind_ = DescriptorKind::GroupRing;
    d.group_ = g;
    d.group_name_ = describe_group(g);
    d.dedekind_ = false;
    return d;
  }

  static RingDescriptor twisted(std::uint64_t m, Twist t) {
    require(m >= 4 && is_power_of_two(m), ErrorCode::InvalidArgument, "twisted extensions need m = 2^k >= 4");
    require(t != Twist::None, ErrorCode::InvalidArgument, "missing twist");
    RingDescriptor d;
    d.kind_ = DescriptorKind::Twisted;
    d.base_ = BasePID::integers();
    d.zeta_ = m;
    d.twist_ = t;
    return d;
  }

  /// Z[zeta_m + sign zeta_m^-1] with complex conjugation.
  static RingDescriptor real_subring(std::uint64_t m, int sign) {
    require(sign == 1 || sign == -1, ErrorCode::InvalidArgument, "sign must be +1 or -1");
    RingDescriptor d;
    d.kind_ = DescriptorKind::RealSubring;
    d.base_ = BasePID::integers();
    d.zeta_ = m;
    d.sign_ = sign;
    d.dedekind_ = true;
    return d;
  }

  /// The relative term of an inclusion source -> target.
  static RingDescriptor pair(const RingDescriptor& source, const RingDescriptor& target) {
    RingDescriptor d;
    d.kind_ = DescriptorKind::Pair;
    d.base_ = source.base_;
    d.parts_ = {source, target};
    return d;
  }

  /// (prod_{d | N} base[zeta_d]) twisted by P acting through tau (exponents on generators of P).
  static RingDescriptor hyper_twisted(const BasePID& base, std::uint64_t n, const FiniteGroup& p, std::vector<long long> tau) {
    RingDescriptor d;
    d.kind_ = DescriptorKind::HyperTwisted;
    d.base_ = base;
    d.n_ = n;
    d.group_ = p;
    d.group_name_ = describe_group(p);
    d.tau_ = std::move(tau);
    return d;
  }

  DescriptorKind kind() const { return kind_; }
  const BasePID& base() const { return base_; }
  std::uint64_t zeta() const { return zeta_; }
  bool has_group() const { return group_.has_value(); }
  const FiniteGroup& group() const {
    require(group_.has_value(), ErrorCode::InvalidArgument, "descriptor has no group");
    return *group_;
  }
  const std::string& group_name() const { return group_name_; }
  Twist twist() const { return twist_; }
  int sign() const { return sign_; }
  const std::vector<RingDescriptor>& parts() const { return parts_; }
  std::uint64_t hyper_n() const { return n_; }
  const std::vector<long long>& tau() const { return tau_; }
  bool dedekind() const { return dedekind_; }

  bool is_coefficient() const { return kind_ == DescriptorKind::Coefficient; }
  bool is_integers() const { return is_coefficient() && base_ == BasePID::integers() && zeta_ == 1; }
  bool is_f2() const { return is_coefficient() && base_ == BasePID::f2() && zeta_ == 1; }

  std::string coefficient_name() const {
    if (zeta_ == 1) return base_.name();
    return base_.name() + "[zeta_" + std::to_string(zeta_) + "]";
  }

  std::string name() const {
    switch (kind_) {
      case DescriptorKind::Coefficient: return coefficient_name();
      case DescriptorKind::GroupRing: return coefficient_name() + "[" + group_name_ + "]";
      case DescriptorKind::Twisted: return coefficient_name() + " " + twist_suffix(twist_);
      case DescriptorKind::RealSubring: {
        const std::string z = "zeta_" + std::to_string(zeta_);
        return base_.name() + "[" + z + (sign_ > 0 ? " + " : " - ") + z + "^-1]";
      }
      case DescriptorKind::Pair: return "(" + parts_[0].name() + " -> " + parts_[1].name() + ")";
      case DescriptorKind::HyperTwisted: {
        const std::string nn = std::to_string(n_);
        return "(+)_{d|" + nn + "} " + BasePID::localized(n_).name() + "[zeta_d] o_tau " + group_name_;
      }
    }
    return "?";
  }

  Json to_json() const {
    Json j;
    j["name"] = name();
    j["base"] = base_.name();
    j["dedekind"] = dedekind_;
    switch (kind_) {
      case DescriptorKind::Coefficient:
        j["kind"] = "coefficient";
        j["zeta"] = zeta_;
        break;
      case DescriptorKind::GroupRing:
        j["kind"] = "group_ring";
        j["zeta"] = zeta_;
        j["group"] = group_json();
        break;
      case DescriptorKind::Twisted:
        j["kind"] = "twisted";
        j["zeta"] = zeta_;
        j["twist"] = twist_code(twist_);
        break;
      case DescriptorKind::RealSubring:
        j["kind"] = "real_subring";
        j["zeta"] = zeta_;
        j["sign"] = sign_;
        break;
      case DescriptorKind::Pair:
        j["kind"] = "pair";
        j["parts"] = Json::array({parts_[0].to_json(), parts_[1].to_json()});
        break;
      case DescriptorKind::HyperTwisted:
        j["kind"] = "hyper_twisted";
        j["n"] = n_;
        j["group"] = group_json();
        j["tau"] = tau_;
        break;
    }
    return j;
  }

  /// Rebuilds through the constructors; the Dedekind flag in the input is ignored.
  static RingDescriptor from_json(const Json& j) {
    require(j.is_object() && j.contains("kind"), ErrorCode::ParseError, "ring descriptor needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    const BasePID base = BasePID::parse(j.value("base", std::string("Z")));
    if (kind == "coefficient") return coefficient(base, j.at("zeta").get<std::uint64_t>());
    if (kind == "group_ring") return group_ring(base, j.at("zeta").get<std::uint64_t>(), group_from_json(j.at("group")));
    if (kind == "twisted") return twisted(j.at("zeta").get<std::uint64_t>(), twist_from_string(j.at("twist").get<std::string>()));
    if (kind == "real_subring") return real_subring(j.at("zeta").get<std::uint64_t>(), j.at("sign").get<int>());
    if (kind == "pair") {
      require(j.at("parts").size() == 2, ErrorCode::ParseError, "pair needs two parts");
      return pair(from_json(j.at("parts")[0]), from_json(j.at("parts")[1]));
    }
    if (kind == "hyper_twisted")
      return hyper_twisted(base, j.at("n").get<std::uint64_t>(), group_from_json(j.at("group")),
                           j.at("tau").get<std::vector<long long>>());
    fail(ErrorCode::ParseError, "unknown descriptor kind '" + kind + "'");
  }

  friend bool operator==(const RingDescriptor& a, const RingDescriptor& b) { return a.to_json() == b.to_json(); }

 private:
  Json group_json() const {
    Json g = group_to_json(*group_);
    g["name"] = group_name_;
    return g;
  }

  DescriptorKind kind_ = DescriptorKind::Coefficient;
  BasePID base_;
  std::uint64_t zeta_ = 1;
  std::optional<FiniteGroup> group_;
  std::string group_name_;
  Twist twist_ = Twist::None;
  int sign_ = 1;
  std::vector<RingDescriptor> parts_;
  std::uint64_t n_ = 1;
  std::vector<long long> tau_;
  bool dedekind_ = false;
};

/// The concrete ring behind a descriptor, when one is available and of rank <= max_rank.
inline std::optional<InvolutiveRing> build_ring(const RingDescriptor& d, std::size_t max_rank = 256) {
  auto phi = [](std::uint64_t m) { return static_cast<std::size_t>(euler_phi(m)); };
  switch (d.kind()) {
    case DescriptorKind::Coefficient:
      if (phi(d.zeta()) > max_rank) return std::nullopt;
      return cyclotomic_ring(d.zeta(), d.base());
    case DescriptorKind::GroupRing: {
      if (phi(d.zeta()) * d.group().order() > max_rank) return std::nullopt;
      if (d.zeta() == 1) return group_ring(d.base(), d.group());
      return group_ring_over(cyclotomic_ring(d.zeta(), d.base()), d.group());
    }
    case DescriptorKind::Twisted: {
      if (2 * phi(d.zeta()) > max_rank) return std::nullopt;
      QuadraticExtensionSpec spec{d.twist() == Twist::NegativeConjugation ? QuadraticTwist::NegativeConjugation
                                                                          : QuadraticTwist::Conjugation,
                                  d.twist() == Twist::Quaternionic ? -1 : 1, 1};
      return cyclotomic_quadratic_extension(d.zeta(), spec, d.base());
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------- terms

/// An explicitly known value, as a list of summands such as "Z[x]/4" or "xZ[x]/2".
struct KnownGroup {
  std::vector<std::string> summands;
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < summands.size(); ++i) out += (i ? " + " : "") + summands[i];
    return out.empty() ? "0" : out;
  }
  friend bool operator==(const KnownGroup& a, const KnownGroup& b) { return a.summands == b.summands; }
};

/// The conjugation action of F/S on an abelian S: one permutation of S's
/// elements per generator of F/S.
struct GroupAction {
  FiniteGroup acting;
  std::string acting_name;
  std::vector<int> generators;              // in the acting group
  std::vector<std::vector<int>> permutations;

  bool trivial() const {
    for (const auto& p : permutations)
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != int(i)) return false;
    return true;
  }
};

struct NLTerm {
  enum class Kind { Atom, Zero, Known, Sum, Coinvariants, Extension };
  Kind kind = Kind::Zero;

  // Atom
  int degree = 0;  // mod 4
  Decoration dec;
  std::optional<RingDescriptor> ring;
  bool reduced = false;

  KnownGroup known;
  std::vector<NLTerm> children;  // Sum: summands; Coinvariants: {argument}; Extension: the sequence
  std::optional<GroupAction> action;
  std::size_t unknown = 0;  // Extension: index of the term being computed
  std::string cite;

  static NLTerm atom(long long n, Decoration dec, RingDescriptor ring, bool reduced = false) {
    NLTerm t;
    t.kind = Kind::Atom;
    t.degree = int(((n % 4) + 4) % 4);
    t.dec = dec;
    t.ring = std::move(ring);
    t.reduced = reduced;
    return t;
  }
  static NLTerm zero() { return NLTerm(); }
  static NLTerm known_group(KnownGroup k) {
    if (k.summands.empty()) return zero();
    NLTerm t;
    t.kind = Kind::Known;
    t.known = std::move(k);
    return t;
  }
  static NLTerm sum(std::vector<NLTerm> terms) {
    NLTerm t;
    t.kind = Kind::Sum;
    t.children = std::move(terms);
    return t;
  }
  static NLTerm coinvariants(NLTerm arg, GroupAction a) {
    NLTerm t;
    t.kind = Kind::Coinvariants;
    t.children = {std::move(arg)};
    t.action = std::move(a);
    return t;
  }
  static NLTerm extension(std::vector<NLTerm> sequence, std::size_t unknown, std::string cite) {
    NLTerm t;
    t.kind = Kind::Extension;
    t.children = std::move(sequence);
    t.unknown = unknown;
    t.cite = std::move(cite);
    return t;
  }

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_zero() const { return kind == Kind::Zero; }
  const RingDescriptor& descriptor() const { return *ring; }

  Json to_json() const {
    Json j;
    switch (kind) {
      case Kind::Atom:
        j = {{"node", "atom"}, {"n", degree}, {"dec", dec.str()}, {"ring", ring->to_json()}, {"reduced", reduced}};
        break;
      case Kind::Zero: j = {{"node", "zero"}}; break;
      case Kind::Known: j = {{"node", "known"}, {"summands", known.summands}}; break;
      case Kind::Sum: {
        Json arr = Json::array();
        for (const auto& c : children) arr.push_back(c.to_json());
        j = {{"node", "sum"}, {"terms", arr}};
        break;
      }
      case Kind::Coinvariants: {
        Json g = group_to_json(action->acting);
        g["name"] = action->acting_name;
        j = {{"node", "coinvariants"},
             {"term", children[0].to_json()},
             {"acting", g},
             {"generators", action->generators},
             {"action", action->permutations}};
        break;
      }
      case Kind::Extension: {
        Json arr = Json::array();
        for (const auto& c : children) arr.push_back(c.to_json());
        j = {{"node", "extension"}, {"sequence", arr}, {"unknown", unknown}, {"cite", cite}};
        break;
      }
    }
    return j;
  }

  static NLTerm from_json(const Json& j) {
    require(j.is_object() && j.contains("node"), ErrorCode::ParseError, "term needs a node tag");
    const std::string node = j.at("node").get<std::string>();
    if (node == "zero") return zero();
    if (node == "atom")
      return atom(j.at("n").get<long long>(), Decoration::parse(j.at("dec").get<std::string>()),
                  RingDescriptor::from_json(j.at("ring")), j.value("reduced", false));
    if (node == "known") return known_group({j.at("summands").get<std::vector<std::string>>()});
    if (node == "sum" || node == "extension") {
      std::vector<NLTerm> terms;
      for (const auto& c : j.at(node == "sum" ? "terms" : "sequence")) terms.push_back(from_json(c));
      if (node == "sum") return sum(std::move(terms));
      return extension(std::move(terms), j.at("unknown").get<std::size_t>(), j.value("cite", std::string()));
    }
    if (node == "coinvariants") {
      GroupAction a;
      a.acting = group_from_json(j.at("acting"));
      a.acting_name = j.at("acting").value("name", describe_group(a.acting));
      a.generators = j.at("generators").get<std::vector<int>>();
      a.permutations = j.at("action").get<std::vector<std::vector<int>>>();
      return coinvariants(from_json(j.at("term")), std::move(a));
    }
    fail(ErrorCode::ParseError, "unknown term node '" + node + "'");
  }

  std::string str() const {
    switch (kind) {
      case Kind::Atom:
        return std::string(reduced ? "NL~" : "NL") + "_" + std::to_string(degree) + "^" + dec.str() + "(" + ring->name() + ")";
      case Kind::Zero: return "0";
      case Kind::Known: return known.str();
      case Kind::Sum: {
        std::string out;
        for (std::size_t i = 0; i < children.size(); ++i) out += (i ? " + " : "") + children[i].str();
        return "(" + out + ")";
      }
      case Kind::Coinvariants: return "(" + children[0].str() + ")_{" + action->acting_name + "}";
      case Kind::Extension: {
        std::string out;
        for (std::size_t i = 0; i < children.size(); ++i) {
          out += (i ? " -> " : "");
          out += i == unknown ? "[" + children[i].str() + "]" : children[i].str();
        }
        return "ext{" + out + "}";
      }
    }
    return "?";
  }

  friend bool operator==(const NLTerm& a, const NLTerm& b) { return a.to_json() == b.to_json(); }
  friend bool operator!=(const NLTerm& a, const NLTerm& b) { return !(a == b); }
};

/// Flattens and sorts sums, drops zeros, and collapses coinvariants of 0.
inline NLTerm canonicalize(const NLTerm& t) {
  switch (t.kind) {
    case NLTerm::Kind::Sum: {
      std::vector<NLTerm> flat;
      for (const auto& c : t.children) {
        NLTerm cc = canonicalize(c);
        if (cc.kind == NLTerm::Kind::Sum) {
          for (auto& x : cc.children) flat.push_back(std::move(x));
        } else if (!cc.is_zero()) {
          flat.push_back(std::move(cc));
        }
      }
      if (flat.empty()) return NLTerm::zero();
      if (flat.size() == 1) return flat.front();
      std::vector<std::pair<std::string, std::size_t>> keys;
      for (std::size_t i = 0; i < flat.size(); ++i) keys.emplace_back(flat[i].to_json().dump(), i);
      std::sort(keys.begin(), keys.end());
      std::vector<NLTerm> sorted;
      for (const auto& k : keys) sorted.push_back(flat[k.second]);
      return NLTerm::sum(std::move(sorted));
    }
    case NLTerm::Kind::Coinvariants: {
      NLTerm arg = canonicalize(t.children[0]);
      if (arg.is_zero()) return NLTerm::zero();
      NLTerm out = t;
      out.children[0] = std::move(arg);
      return out;
    }
    case NLTerm::Kind::Extension: {
      NLTerm out = t;
      for (auto& c : out.children) c = canonicalize(c);
      return out;
    }
    default: return t;
  }
}

// ---------------------------------------------------------------- positions

using TermPath = std::vector<std::size_t>;

inline const NLTerm& subterm(const NLTerm& t, const TermPath& path) {
  const NLTerm* cur = &t;
  for (auto i : path) {
    require(i < cur->children.size(), ErrorCode::InvalidArgument, "term path out of range");
    cur = &cur->children[i];
  }
  return *cur;
}

inline NLTerm replace_subterm(const NLTerm& t, const TermPath& path, const NLTerm& replacement, std::size_t depth = 0) {
  if (depth == path.size()) return replacement;
  NLTerm out = t;
  require(path[depth] < out.children.size(), ErrorCode::InvalidArgument, "term path out of range");
  out.children[path[depth]] = replace_subterm(t.children[path[depth]], path, replacement, depth + 1);
  return out;
}

/// Pre-order positions that rules may rewrite; the unknown of an extension is frozen.
inline void rewritable_positions(const NLTerm& t, TermPath& cur, std::vector<TermPath>& out) {
  out.push_back(cur);
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.kind == NLTerm::Kind::Extension && i == t.unknown) continue;
    cur.push_back(i);
    rewritable_positions(t.children[i], cur, out);
    cur.pop_back();
  }
}

inline std::vector<TermPath> rewritable_positions(const NLTerm& t) {
  std::vector<TermPath> out;
  TermPath cur;
  rewritable_positions(t, cur, out);
  return out;
}

}  // namespace unil
