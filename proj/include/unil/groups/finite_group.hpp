#pragma once

#include <algorithm>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "unil/core/errors.hpp"

namespace unil {

inline constexpr std::size_t kHardMaxOrder = 128;

/// Order cap, from UNIL_MAX_ORDER when set (never above 128).
inline std::size_t max_group_order() {
  if (const char* env = std::getenv("UNIL_MAX_ORDER")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return std::min<std::size_t>(v, kHardMaxOrder);
  }
  return kHardMaxOrder;
}

using ElementSet = std::bitset<kHardMaxOrder>;

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const {
    std::size_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < kHardMaxOrder; i += 64) {
      std::uint64_t w = 0;
      for (std::size_t b = 0; b < 64; ++b)
        if (s[i + b]) w |= std::uint64_t{1} << b;
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline bool element_set_less(const ElementSet& a, const ElementSet& b) {
  for (std::size_t i = 0; i < kHardMaxOrder; ++i)
    if (a[i] != b[i]) return b[i];
  return false;
}

/// Subset of a group's elements; used for subgroups and cosets alike.
struct Subgroup {
  ElementSet bits;

  std::size_t order() const { return bits.count(); }
  bool contains(int x) const { return bits[static_cast<std::size_t>(x)]; }
  std::vector<int> elements() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < kHardMaxOrder; ++i)
      if (bits[i]) out.push_back(static_cast<int>(i));
    return out;
  }
  bool is_subset_of(const Subgroup& o) const { return (bits & ~o.bits).none(); }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.bits == b.bits; }
  friend bool operator!=(const Subgroup& a, const Subgroup& b) { return a.bits != b.bits; }
};

/// Finite group as a Cayley table; index 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}, {}) {}

  FiniteGroup(const std::vector<std::vector<int>>& table, std::vector<std::string> names, bool check = true)
      : n_(table.size()), names_(std::move(names)) {
    require(n_ >= 1, ErrorCode::InvalidPresentation, "group must be nonempty");
    if (n_ > max_group_order())
      fail(ErrorCode::OrderTooLarge,
           "group order " + std::to_string(n_) + " exceeds the cap " + std::to_string(max_group_order()));
    table_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      require(table[i].size() == n_, ErrorCode::InvalidPresentation, "Cayley table is not square");
      for (std::size_t j = 0; j < n_; ++j) {
        int v = table[i][j];
        require(v >= 0 && static_cast<std::size_t>(v) < n_, ErrorCode::InvalidPresentation, "table entry out of range");
        table_[i * n_ + j] = static_cast<std::uint8_t>(v);
      }
    }
    if (check) validate();
    inverse_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (mul(static_cast<int>(a), static_cast<int>(b)) == 0) {
          inverse_[a] = static_cast<int>(b);
          break;
        }
    if (names_.size() != n_) {
      names_.clear();
      for (std::size_t i = 0; i < n_; ++i) names_.push_back(i == 0 ? "e" : "g" + std::to_string(i));
    }
  }

  std::size_t order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)]; }
  int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1
  int power(int a, long long k) const {
    int base = k < 0 ? inv(a) : a;
    unsigned long long e = static_cast<unsigned long long>(k < 0 ? -k : k);
    int r = 0;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  std::size_t element_order(int a) const {
    std::size_t k = 1;
    for (int x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int a) const { return names_[static_cast<std::size_t>(a)]; }

  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t[i][j] = mul(static_cast<int>(i), static_cast<int>(j));
    return t;
  }

  bool is_abelian() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (mul(int(a), int(b)) != mul(int(b), int(a))) return false;
    return true;
  }

  Subgroup whole() const {
    Subgroup s;
    for (std::size_t i = 0; i < n_; ++i) s.bits.set(i);
    return s;
  }
  Subgroup trivial() const {
    Subgroup s;
    s.bits.set(0);
    return s;
  }

  /// Subgroup generated by the given elements.
  Subgroup closure(const std::vector<int>& gens) const {
    Subgroup s;
    s.bits.set(0);
    std::vector<int> frontier{0};
    std::vector<int> g;
    for (int x : gens)
      if (x != 0) g.push_back(x);
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (int y : g) {
        int z = mul(x, y);
        if (!s.bits[std::size_t(z)]) {
          s.bits.set(std::size_t(z));
          frontier.push_back(z);
        }
      }
    }
    return s;
  }
  Subgroup closure(const ElementSet& set) const {
    std::vector<int> gens;
    for (std::size_t i = 0; i < n_; ++i)
      if (set[i]) gens.push_back(int(i));
    return closure(gens);
  }

  bool is_subgroup(const Subgroup& h) const {
    if (!h.bits[0]) return false;
    for (int a : h.elements())
      for (int b : h.elements())
        if (!h.contains(mul(a, inv(b)))) return false;
    return true;
  }

  Subgroup conjugate(int g, const Subgroup& h) const {
    Subgroup c;
    for (int x : h.elements()) c.bits.set(std::size_t(conj(g, x)));
    return c;
  }

  bool is_normal(const Subgroup& h) const {
    for (std::size_t g = 0; g < n_; ++g)
      if (conjugate(int(g), h) != h) return false;
    return true;
  }

  bool is_abelian(const Subgroup& h) const {
    auto el = h.elements();
    for (int a : el)
      for (int b : el)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  bool is_cyclic(const Subgroup& h) const {
    for (int a : h.elements())
      if (element_order(a) == h.order()) return true;
    return false;
  }

  Subgroup normalizer(const Subgroup& h) const {
    Subgroup n;
    for (std::size_t g = 0; g < n_; ++g)
      if (conjugate(int(g), h) == h) n.bits.set(g);
    return n;
  }

  Subgroup centralizer(const Subgroup& h) const {
    Subgroup c;
    for (std::size_t g = 0; g < n_; ++g) {
      bool ok = true;
      for (int x : h.elements())
        if (mul(int(g), x) != mul(x, int(g))) {
          ok = false;
          break;
        }
      if (ok) c.bits.set(g);
    }
    return c;
  }

  Subgroup center() const { return centralizer(whole()); }

  Subgroup derived_subgroup() const {
    std::vector<int> comms;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        comms.push_back(mul(mul(int(a), int(b)), mul(inv(int(a)), inv(int(b)))));
    std::sort(comms.begin(), comms.end());
    comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
    return closure(comms);
  }

  /// A small generating set, chosen greedily from elements of large order
  /// (ties broken by index), deterministic.
  std::vector<int> generators() const {
    std::vector<int> by_order(n_);
    std::iota(by_order.begin(), by_order.end(), 0);
    std::stable_sort(by_order.begin(), by_order.end(),
                     [&](int a, int b) { return element_order(a) > element_order(b); });
    std::vector<int> gens;
    Subgroup cur = trivial();
    while (cur.order() < n_) {
      // pick the element that enlarges the span most
      int best = -1;
      std::size_t best_size = 0;
      for (int x : by_order) {
        if (cur.contains(x)) continue;
        auto tmp = gens;
        tmp.push_back(x);
        std::size_t sz = closure(tmp).order();
        if (sz > best_size) {
          best_size = sz;
          best = x;
        }
      }
      gens.push_back(best);
      cur = closure(gens);
    }
    return gens;
  }

  /// Every subgroup, sorted by order then by element set.
  std::vector<Subgroup> all_subgroups() const {
    std::vector<Subgroup> cyclic;
    std::unordered_set<ElementSet, ElementSetHash> seen;
    for (std::size_t g = 0; g < n_; ++g) {
      Subgroup c = closure(std::vector<int>{int(g)});
      if (seen.insert(c.bits).second) cyclic.push_back(c);
    }
    std::vector<Subgroup> all = cyclic;
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (const auto& c : cyclic) {
        if (c.is_subset_of(all[i])) continue;
        Subgroup j = closure(all[i].bits | c.bits);
        if (seen.insert(j.bits).second) all.push_back(j);
      }
    }
    std::sort(all.begin(), all.end(), [](const Subgroup& a, const Subgroup& b) {
      if (a.order() != b.order()) return a.order() < b.order();
      return element_set_less(a.bits, b.bits);
    });
    return all;
  }

  std::vector<Subgroup> normal_subgroups() const {
    std::vector<Subgroup> out;
    for (const auto& h : all_subgroups())
      if (is_normal(h)) out.push_back(h);
    return out;
  }

  /// Left cosets gH, each as an element set, ordered by smallest element.
  std::vector<Subgroup> left_cosets(const Subgroup& h) const {
    std::vector<Subgroup> cosets;
    ElementSet covered;
    for (std::size_t g = 0; g < n_; ++g) {
      if (covered[g]) continue;
      Subgroup c;
      for (int x : h.elements()) c.bits.set(std::size_t(mul(int(g), x)));
      covered |= c.bits;
      cosets.push_back(c);
    }
    return cosets;
  }

 private:
  void validate() const {
    for (std::size_t i = 0; i < n_; ++i) {
      require(mul(0, int(i)) == int(i) && mul(int(i), 0) == int(i), ErrorCode::InvalidPresentation,
              "index 0 is not a two-sided identity");
      std::vector<bool> row(n_), col(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        row[std::size_t(mul(int(i), int(j)))] = true;
        col[std::size_t(mul(int(j), int(i)))] = true;
      }
      for (std::size_t j = 0; j < n_; ++j)
        require(row[j] && col[j], ErrorCode::InvalidPresentation, "Cayley table is not a Latin square");
    }
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) {
        int ab = mul(int(a), int(b));
        for (std::size_t c = 0; c < n_; ++c)
          if (mul(ab, int(c)) != mul(int(a), mul(int(b), int(c))))
            fail(ErrorCode::InvalidPresentation, "Cayley table is not associative");
      }
  }

  std::size_t n_;
  std::vector<std::uint8_t> table_;
  std::vector<int> inverse_;
  std::vector<std::string> names_;
};

/// A subgroup regarded as a group in its own right, with the embedding into the parent.
struct SubgroupGroup {
  FiniteGroup group;
  std::vector<int> embedding;  // index in subgroup -> index in parent (embedding[0] = 0)
};

inline SubgroupGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h) {
  require(g.is_subgroup(h), ErrorCode::InvalidArgument, "element set is not a subgroup");
  std::vector<int> el = h.elements();  // sorted, identity first
  std::map<int, int> index;
  for (std::size_t i = 0; i < el.size(); ++i) index[el[i]] = int(i);
  std::vector<std::vector<int>> table(el.size(), std::vector<int>(el.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < el.size(); ++i) {
    names.push_back(g.name(el[i]));
    for (std::size_t j = 0; j < el.size(); ++j) table[i][j] = index.at(g.mul(el[i], el[j]));
  }
  return {FiniteGroup(table, names, false), el};
}

/// G/K with the projection G -> G/K.
struct QuotientGroup {
  FiniteGroup group;
  std::vector<int> projection;  // element of G -> coset index
  std::vector<int> section;     // coset index -> smallest representative in G
};

inline QuotientGroup quotient_by(const FiniteGroup& g, const Subgroup& k) {
  if (!g.is_subgroup(k)) fail(ErrorCode::InvalidArgument, "not a subgroup");
  if (!g.is_normal(k)) fail(ErrorCode::NotNormal, "subgroup is not normal");
  auto cosets = g.left_cosets(k);
  std::vector<int> proj(g.order());
  std::vector<int> section;
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    section.push_back(cosets[c].elements().front());
    for (int x : cosets[c].elements()) proj[std::size_t(x)] = int(c);
  }
  std::vector<std::vector<int>> table(cosets.size(), std::vector<int>(cosets.size()));
  std::vector<std::string> names;
  for (std::size_t a = 0; a < cosets.size(); ++a) {
    names.push_back(g.name(section[a]) + "K");
    for (std::size_t b = 0; b < cosets.size(); ++b)
      table[a][b] = proj[std::size_t(g.mul(section[a], section[b]))];
  }
  if (!names.empty()) names[0] = "e";
  return {FiniteGroup(table, names, false), proj, section};
}

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::size_t two_part(std::size_t n) {
  std::size_t p = 1;
  while (n % 2 == 0) {
    n /= 2;
    p *= 2;
  }
  return p;
}

}  // namespace unil
