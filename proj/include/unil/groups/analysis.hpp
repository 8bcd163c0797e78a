#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unil/core/errors.hpp"
#include "unil/groups/construct.hpp"
#include "unil/groups/finite_group.hpp"

namespace unil {

// ---------------------------------------------------------------- isomorphism

namespace detail {

inline std::vector<std::size_t> order_profile(const FiniteGroup& g) {
  std::vector<std::size_t> p;
  for (std::size_t x = 0; x < g.order(); ++x) p.push_back(g.element_order(int(x)));
  std::sort(p.begin(), p.end());
  return p;
}

/// Tries to extend generator images to an isomorphism; returns the element map.
inline std::optional<std::vector<int>> extend_to_isomorphism(const FiniteGroup& g, const FiniteGroup& h,
                                                             const std::vector<int>& gens,
                                                             const std::vector<int>& images) {
  std::vector<int> map(g.order(), -1);
  map[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int y = g.mul(x, gens[i]);
      int img = h.mul(map[std::size_t(x)], images[i]);
      if (map[std::size_t(y)] == -1) {
        map[std::size_t(y)] = img;
        queue.push_back(y);
      } else if (map[std::size_t(y)] != img) {
        return std::nullopt;
      }
    }
  }
  std::vector<bool> hit(h.order());
  for (int v : map) {
    if (v < 0 || hit[std::size_t(v)]) return std::nullopt;
    hit[std::size_t(v)] = true;
  }
  return map;
}

}  // namespace detail

/// An isomorphism g -> h as an element map, if one exists. Invariant screening
/// first, then backtracking over images of a generating set.
inline std::optional<std::vector<int>> find_isomorphism(const FiniteGroup& g, const FiniteGroup& h) {
  if (g.order() != h.order()) return std::nullopt;
  if (detail::order_profile(g) != detail::order_profile(h)) return std::nullopt;
  if (g.is_abelian() != h.is_abelian()) return std::nullopt;
  if (g.center().order() != h.center().order()) return std::nullopt;
  if (g.derived_subgroup().order() != h.derived_subgroup().order()) return std::nullopt;
  auto gens = g.order() == 1 ? std::vector<int>{} : g.generators();
  std::vector<std::vector<int>> candidates(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t y = 0; y < h.order(); ++y)
      if (h.element_order(int(y)) == g.element_order(gens[i])) candidates[i].push_back(int(y));
  std::vector<int> images(gens.size());
  std::optional<std::vector<int>> found;
  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == gens.size()) {
      found = detail::extend_to_isomorphism(g, h, gens, images);
      return found.has_value();
    }
    for (int y : candidates[i]) {
      images[i] = y;
      // the images must satisfy the same pairwise product orders
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = g.element_order(g.mul(gens[j], gens[i])) == h.element_order(h.mul(images[j], y));
      if (ok && search(i + 1)) return true;
    }
    return false;
  };
  search(0);
  return found;
}

inline bool are_isomorphic(const FiniteGroup& g, const FiniteGroup& h) { return find_isomorphism(g, h).has_value(); }

// ---------------------------------------------------------------- Sylow

struct SylowResult {
  Subgroup subgroup;
  bool normal = false;
  bool abelian = false;
};

/// A Sylow 2-subgroup, grown one step at a time inside normalizers.
inline SylowResult sylow2(const FiniteGroup& g) {
  const std::size_t target = two_part(g.order());
  Subgroup p = g.trivial();
  while (p.order() < target) {
    Subgroup n = g.normalizer(p);
    bool grown = false;
    for (int x : n.elements()) {
      if (p.contains(x)) continue;
      std::size_t ord = g.element_order(x);
      int y = g.power(x, static_cast<long long>(ord / two_part(ord)));  // 2-part of x
      if (p.contains(y)) continue;
      std::vector<int> gens = p.elements();
      gens.push_back(y);
      Subgroup q = g.closure(gens);
      if (is_power_of_two(q.order())) {
        p = q;
        grown = true;
        break;
      }
    }
    require(grown, ErrorCode::VerificationFailed, "Sylow subgroup search stalled");
  }
  return {p, g.is_normal(p), g.is_abelian(p)};
}

// ---------------------------------------------------------------- hyperelementary

/// H = C_N x|_tau P with N odd; tau records, for each element p of P (as an
/// index in the parent group), the exponent k with p T p^-1 = T^k.
struct HyperelementaryDecomposition {
  std::size_t n = 1;
  int cyclic_generator = 0;  // T, generating the normal C_N
  Subgroup cyclic_part;
  Subgroup p;
  std::map<int, long long> tau;  // element of P -> exponent
  bool trivial_action() const {
    if (n == 1) return true;
    for (const auto& [x, k] : tau)
      if (k != 1) return false;
    return true;
  }
};

inline std::optional<HyperelementaryDecomposition> is_2hyperelementary(const FiniteGroup& h) {
  const std::size_t n = h.order() / two_part(h.order());
  HyperelementaryDecomposition d;
  d.n = n;
  auto syl = sylow2(h);
  d.p = syl.subgroup;
  if (n == 1) {
    d.cyclic_part = h.trivial();
    for (int x : d.p.elements()) d.tau[x] = 1;
    return d;
  }
  for (std::size_t t = 0; t < h.order(); ++t) {
    if (h.element_order(int(t)) != n) continue;
    Subgroup c = h.closure(std::vector<int>{int(t)});
    if (!h.is_normal(c)) continue;
    d.cyclic_generator = int(t);
    d.cyclic_part = c;
    for (int x : d.p.elements()) {
      int img = h.conj(x, int(t));
      long long k = 0;
      while (h.power(int(t), k) != img) ++k;
      d.tau[x] = k % static_cast<long long>(n);
    }
    return d;
  }
  return std::nullopt;
}

/// Rebuilds C_N x|_tau P from a decomposition (used to check it).
inline FiniteGroup reconstruct_hyperelementary(const FiniteGroup& h, const HyperelementaryDecomposition& d) {
  FiniteGroup cn = cyclic_group(d.n);
  SubgroupGroup pg = subgroup_as_group(h, d.p);
  auto gens = pg.group.order() == 1 ? std::vector<int>{} : pg.group.generators();
  std::vector<std::vector<int>> images;
  for (int g : gens) images.push_back(power_map(cn, d.tau.at(pg.embedding[std::size_t(g)])));
  return semidirect_product(cn, pg.group, images);
}

struct CategoryMorphism {
  std::size_t source = 0;
  int element = 0;  // conjugating element g (0 for plain inclusions)
  std::size_t target = 0;
};

struct HyperelementaryCategory {
  std::vector<Subgroup> objects;
  std::vector<CategoryMorphism> morphisms;
};

inline bool is_2hyperelementary_subgroup(const FiniteGroup& g, const Subgroup& h) {
  return is_2hyperelementary(subgroup_as_group(g, h).group).has_value();
}

/// All 2-hyperelementary subgroups, with covering inclusions and the
/// conjugations by generators of G that act nontrivially.
inline HyperelementaryCategory hyperelementary_category(const FiniteGroup& g) {
  HyperelementaryCategory cat;
  for (const auto& h : g.all_subgroups())
    if (is_2hyperelementary_subgroup(g, h)) cat.objects.push_back(h);
  auto index_of = [&](const Subgroup& s) -> std::size_t {
    for (std::size_t i = 0; i < cat.objects.size(); ++i)
      if (cat.objects[i] == s) return i;
    fail(ErrorCode::VerificationFailed, "conjugate of a hyperelementary subgroup is missing");
  };
  for (std::size_t i = 0; i < cat.objects.size(); ++i)
    for (std::size_t j = 0; j < cat.objects.size(); ++j) {
      if (i == j || !cat.objects[i].is_subset_of(cat.objects[j])) continue;
      bool covering = true;
      for (std::size_t k = 0; k < cat.objects.size() && covering; ++k)
        if (k != i && k != j && cat.objects[i].is_subset_of(cat.objects[k]) && cat.objects[k].is_subset_of(cat.objects[j]))
          covering = false;
      if (covering) cat.morphisms.push_back({i, 0, j});
    }
  auto gens = g.order() == 1 ? std::vector<int>{} : g.generators();
  for (std::size_t i = 0; i < cat.objects.size(); ++i)
    for (int x : gens) {
      if (g.centralizer(cat.objects[i]).contains(x)) continue;
      cat.morphisms.push_back({i, x, index_of(g.conjugate(x, cat.objects[i]))});
    }
  return cat;
}

// ---------------------------------------------------------------- double cosets

struct DoubleCoset {
  int representative = 0;
  Subgroup stabilizer;      // K cap a H a^-1
  Subgroup elements;        // K a H
  std::size_t orbit_size = 0;  // number of left H-cosets in K a H
};

inline std::vector<DoubleCoset> double_coset_decomposition(const FiniteGroup& g, const Subgroup& k, const Subgroup& h) {
  require(g.is_subgroup(k) && g.is_subgroup(h), ErrorCode::InvalidArgument, "double cosets need two subgroups");
  std::vector<DoubleCoset> out;
  ElementSet covered;
  for (std::size_t a = 0; a < g.order(); ++a) {
    if (covered[a]) continue;
    DoubleCoset dc;
    dc.representative = int(a);
    for (int x : k.elements())
      for (int y : h.elements()) dc.elements.bits.set(std::size_t(g.mul(g.mul(x, int(a)), y)));
    covered |= dc.elements.bits;
    dc.stabilizer.bits = k.bits & g.conjugate(int(a), h).bits;
    dc.orbit_size = dc.elements.order() / h.order();
    out.push_back(dc);
  }
  return out;
}

/// Checks that the K-orbit of aH is isomorphic to K/(K cap aHa^-1) as a K-set:
/// k (K cap aHa^-1) -> k a H is well defined, bijective and K-equivariant.
inline bool verify_orbit_isomorphism(const FiniteGroup& g, const Subgroup& k, const Subgroup& h, const DoubleCoset& dc) {
  auto coset_of = [&](int x) {  // left H-coset of x, as its smallest element
    int best = -1;
    for (int y : h.elements()) {
      int z = g.mul(x, y);
      if (best < 0 || z < best) best = z;
    }
    return best;
  };
  auto stab_coset = [&](int x) {  // left coset x * stabilizer inside K
    int best = -1;
    for (int y : dc.stabilizer.elements()) {
      int z = g.mul(x, y);
      if (best < 0 || z < best) best = z;
    }
    return best;
  };
  std::map<int, int> forward;  // K/stab coset -> H-coset
  std::map<int, int> backward;
  for (int x : k.elements()) {
    int src = stab_coset(x), dst = coset_of(g.mul(x, dc.representative));
    auto [it, inserted] = forward.emplace(src, dst);
    if (!inserted && it->second != dst) return false;
    auto [jt, ins2] = backward.emplace(dst, src);
    if (!ins2 && jt->second != src) return false;
  }
  if (forward.size() != dc.orbit_size || backward.size() != dc.orbit_size) return false;
  // equivariance: y . (x stab) maps to y . (x a H)
  for (int y : k.elements())
    for (const auto& [src, dst] : forward)
      if (forward.at(stab_coset(g.mul(y, src))) != coset_of(g.mul(y, dst))) return false;
  return true;
}

// ---------------------------------------------------------------- special 2-groups

enum class SpecialKind { Cyclic, Dihedral, Semidihedral, Quaternionic, NotSpecial, Not2Group };

inline std::string special_kind_name(SpecialKind k) {
  switch (k) {
    case SpecialKind::Cyclic: return "cyclic";
    case SpecialKind::Dihedral: return "dihedral";
    case SpecialKind::Semidihedral: return "semidihedral";
    case SpecialKind::Quaternionic: return "quaternionic";
    case SpecialKind::NotSpecial: return "not_special";
    case SpecialKind::Not2Group: return "not_2group";
  }
  return "?";
}

struct Special2Class {
  SpecialKind kind = SpecialKind::NotSpecial;
  unsigned e = 0;  // |P| = 2^e for the four special families
};

inline unsigned log2_of(std::size_t n) {
  unsigned e = 0;
  while ((std::size_t{1} << e) < n) ++e;
  return e;
}

/// Structural classification: a noncyclic special 2-group has a cyclic
/// subgroup <T> of index 2, and the conjugation exponent of an element
/// outside <T>, together with whether that coset contains an involution,
/// pins down the family.
inline Special2Class classify_special_2group(const FiniteGroup& p) {
  const std::size_t n = p.order();
  if (!is_power_of_two(n)) return {SpecialKind::Not2Group, 0};
  const unsigned e = log2_of(n);
  for (std::size_t t = 0; t < n; ++t)
    if (p.element_order(int(t)) == n) return {SpecialKind::Cyclic, e};
  if (e < 3) return {SpecialKind::NotSpecial, 0};
  const std::size_t m = n / 2;
  for (std::size_t t = 0; t < n; ++t) {
    if (p.element_order(int(t)) != m) continue;
    Subgroup tg = p.closure(std::vector<int>{int(t)});
    int r = -1;
    for (std::size_t x = 0; x < n; ++x)
      if (!tg.contains(int(x))) {
        r = int(x);
        break;
      }
    int img = p.conj(r, int(t));
    long long k = 0;
    for (long long i = 0; i < static_cast<long long>(m); ++i)
      if (p.power(int(t), i) == img) k = i;
    bool split = false;
    for (std::size_t x = 0; x < n; ++x)
      if (!tg.contains(int(x)) && p.element_order(int(x)) == 2) split = true;
    const long long mm = static_cast<long long>(m);
    if (k == mm - 1) {
      if (!split) return {SpecialKind::Quaternionic, e};
      if (e >= 4) return {SpecialKind::Dihedral, e};
      return {SpecialKind::NotSpecial, 0};
    }
    if (e >= 4 && k == mm / 2 - 1) return {SpecialKind::Semidihedral, e};
    return {SpecialKind::NotSpecial, 0};
  }
  return {SpecialKind::NotSpecial, 0};
}

/// The definition itself: every normal abelian subgroup is cyclic.
inline bool is_special_by_definition(const FiniteGroup& p) {
  for (const auto& h : p.all_subgroups())
    if (p.is_abelian(h) && p.is_normal(h) && !p.is_cyclic(h)) return false;
  return true;
}

// ---------------------------------------------------------------- naming

/// Invariant factors of an abelian group, in divisibility order.
inline std::vector<std::size_t> abelian_invariants(const FiniteGroup& g) {
  require(g.is_abelian(), ErrorCode::InvalidArgument, "group is not abelian");
  // count elements of each order dividing prime powers, via the elementary divisors
  std::vector<std::size_t> factors;
  std::size_t n = g.order();
  std::map<std::size_t, std::vector<std::size_t>> by_prime;
  for (std::size_t pr = 2; pr <= n; ++pr) {
    bool prime = true;
    for (std::size_t d = 2; d * d <= pr; ++d)
      if (pr % d == 0) prime = false;
    if (!prime || n % pr != 0) continue;
    // number of elements with x^(pr^i) = 1 determines the partition
    std::vector<std::size_t> count;  // count[i] = #{x : x^(pr^i) = 1}
    std::size_t q = 1;
    for (;;) {
      std::size_t c = 0;
      for (std::size_t x = 0; x < n; ++x)
        if (g.power(int(x), static_cast<long long>(q)) == 0) ++c;
      count.push_back(c);
      if (c == count.front() && count.size() > 1 && c == count[count.size() - 2]) break;
      q *= pr;
      if (q > n) {
        std::size_t c2 = 0;
        for (std::size_t x = 0; x < n; ++x)
          if (g.power(int(x), static_cast<long long>(q)) == 0) ++c2;
        count.push_back(c2);
        break;
      }
    }
    // number of cyclic factors of order >= pr^i equals log_pr(count[i]/count[i-1])
    std::vector<std::size_t> at_least;
    for (std::size_t i = 1; i < count.size(); ++i) {
      std::size_t ratio = count[i] / count[i - 1], k = 0;
      while (ratio > 1) {
        ratio /= pr;
        ++k;
      }
      if (k == 0) break;
      at_least.push_back(k);
    }
    std::vector<std::size_t> parts;  // prime-power orders
    for (std::size_t i = 0; i < at_least.size(); ++i) {
      std::size_t exactly = at_least[i] - (i + 1 < at_least.size() ? at_least[i + 1] : 0);
      std::size_t order = 1;
      for (std::size_t j = 0; j <= i; ++j) order *= pr;
      for (std::size_t j = 0; j < exactly; ++j) parts.push_back(order);
    }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    by_prime[pr] = parts;
  }
  std::size_t longest = 0;
  for (const auto& [pr, parts] : by_prime) longest = std::max(longest, parts.size());
  factors.assign(longest, 1);
  for (const auto& [pr, parts] : by_prime)
    for (std::size_t i = 0; i < parts.size(); ++i) factors[i] *= parts[i];
  std::reverse(factors.begin(), factors.end());
  return factors;
}

/// Human-readable name, e.g. "C_6", "C_2xC_2", "Q_8", "D_8", "A_4"; falls back to "G_<order>".
inline std::string describe_group(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n == 1) return "1";
  if (g.is_abelian()) {
    auto inv = abelian_invariants(g);
    std::string out;
    for (auto d : inv) out += (out.empty() ? "" : "x") + std::string("C_") + std::to_string(d);
    return out;
  }
  if (is_power_of_two(n)) {
    auto cls = classify_special_2group(g);
    if (cls.kind == SpecialKind::Quaternionic) return "Q_" + std::to_string(n);
    if (cls.kind == SpecialKind::Semidihedral) return "SD_" + std::to_string(n);
  }
  if (n % 2 == 0 && are_isomorphic(g, dihedral_of_order(n))) return "D_" + std::to_string(n);
  if (n == 12 && are_isomorphic(g, alternating_group(4))) return "A_4";
  if (n == 24 && are_isomorphic(g, symmetric_group(4))) return "S_4";
  if (n == 60 && are_isomorphic(g, alternating_group(5))) return "A_5";
  if (n == 120 && are_isomorphic(g, symmetric_group(5))) return "S_5";
  return "G_" + std::to_string(n);
}

}  // namespace unil
