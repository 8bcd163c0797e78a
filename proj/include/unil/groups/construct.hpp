#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "unil/core/errors.hpp"
#include "unil/groups/finite_group.hpp"

namespace unil {

inline FiniteGroup cyclic_group(std::size_t n) {
  require(n >= 1, ErrorCode::InvalidPresentation, "cyclic(n) needs n >= 1");
  if (n > max_group_order()) fail(ErrorCode::OrderTooLarge, "cyclic group of order " + std::to_string(n));
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(i == 0 ? "e" : i == 1 ? "T" : "T" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) t[i][j] = int((i + j) % n);
  }
  return FiniteGroup(t, names, false);
}

/// <T, R | T^m = 1, R^2 = T^s, R T R^-1 = T^k>; element T^a R^b has index a + m b.
inline FiniteGroup metacyclic_group(std::size_t m, long long k, long long s) {
  const long long mm = static_cast<long long>(m);
  auto md = [&](long long v) { return ((v % mm) + mm) % mm; };
  require(md(k * k) == md(1), ErrorCode::InvalidPresentation, "R T R^-1 = T^k needs k^2 = 1 mod m");
  require(md(k * s) == md(s), ErrorCode::InvalidPresentation, "R^2 = T^s must commute with R");
  const std::size_t n = 2 * m;
  if (n > max_group_order()) fail(ErrorCode::OrderTooLarge, "metacyclic group of order " + std::to_string(n));
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    long long a = static_cast<long long>(i % m), b = static_cast<long long>(i / m);
    std::string nm = a == 0 ? "" : a == 1 ? "T" : "T" + std::to_string(a);
    if (b) nm += "R";
    names.push_back(nm.empty() ? "e" : nm);
    for (std::size_t j = 0; j < n; ++j) {
      long long c = static_cast<long long>(j % m), d = static_cast<long long>(j / m);
      // T^a R^b T^c R^d = T^(a + k^b c) R^(b+d), and R^2 = T^s
      long long exp = a + (b ? k : 1) * c;
      long long r = b + d;
      if (r == 2) {
        exp += s;
        r = 0;
      }
      t[i][j] = int(md(exp) + mm * r);
    }
  }
  return FiniteGroup(t, names, false);
}

/// Dihedral group of order 2^e: T^(2^(e-1)) = 1 = R^2, R T R^-1 = T^-1.
inline FiniteGroup dihedral_group(unsigned e) {
  require(e >= 2 && e <= 7, ErrorCode::InvalidPresentation, "dihedral(e) needs 2 <= e <= 7");
  return metacyclic_group(std::size_t{1} << (e - 1), -1, 0);
}

/// Semidihedral group of order 2^e: R T R^-1 = T^(2^(e-2) - 1).
inline FiniteGroup semidihedral_group(unsigned e) {
  require(e >= 4 && e <= 7, ErrorCode::InvalidPresentation, "semidihedral(e) needs 4 <= e <= 7");
  return metacyclic_group(std::size_t{1} << (e - 1), (1LL << (e - 2)) - 1, 0);
}

/// Generalized quaternion group of order 2^e: R^2 = T^(2^(e-2)), R T R^-1 = T^-1.
inline FiniteGroup quaternionic_group(unsigned e) {
  require(e >= 3 && e <= 7, ErrorCode::InvalidPresentation, "quaternionic(e) needs 3 <= e <= 7");
  return metacyclic_group(std::size_t{1} << (e - 1), -1, 1LL << (e - 2));
}

/// Dihedral group with n elements (n even).
inline FiniteGroup dihedral_of_order(std::size_t n) {
  require(n >= 2 && n % 2 == 0, ErrorCode::InvalidPresentation, "dihedral group order must be even");
  if (n == 2) return cyclic_group(2);
  return metacyclic_group(n / 2, -1, 0);
}

namespace detail {

inline std::string cycle_notation(const std::vector<int>& p) {
  std::string out;
  std::vector<bool> seen(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == int(i)) continue;
    out += "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      out += (first ? "" : " ") + std::to_string(j + 1);
      first = false;
      j = std::size_t(p[j]);
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

inline bool is_even_permutation(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

inline FiniteGroup permutation_group(std::size_t n, bool even_only) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (!even_only || is_even_permutation(p)) perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  if (perms.size() > max_group_order()) fail(ErrorCode::OrderTooLarge, "permutation group too large");
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < perms.size(); ++i) index[perms[i]] = int(i);
  std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    names.push_back(cycle_notation(perms[i]));
    for (std::size_t j = 0; j < perms.size(); ++j) {
      // (a b)(x) = a(b(x))
      std::vector<int> c(n);
      for (std::size_t x = 0; x < n; ++x) c[x] = perms[i][std::size_t(perms[j][x])];
      t[i][j] = index.at(c);
    }
  }
  return FiniteGroup(t, names, false);
}

}  // namespace detail

inline FiniteGroup symmetric_group(std::size_t n) {
  require(n >= 1 && n <= 5, ErrorCode::InvalidPresentation, "symmetric(n) supported for 1 <= n <= 5");
  return detail::permutation_group(n, false);
}

inline FiniteGroup alternating_group(std::size_t n) {
  require(n >= 1 && n <= 5, ErrorCode::InvalidPresentation, "alternating(n) supported for 1 <= n <= 5");
  return detail::permutation_group(n, true);
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  if (n > max_group_order()) fail(ErrorCode::OrderTooLarge, "direct product of order " + std::to_string(n));
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    int ia = int(i % na), ib = int(i / na);
    names.push_back(i == 0 ? "e" : "(" + a.name(ia) + "," + b.name(ib) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      int ja = int(j % na), jb = int(j / na);
      t[i][j] = a.mul(ia, ja) + int(na) * b.mul(ib, jb);
    }
  }
  return FiniteGroup(t, names, false);
}

/// True when the permutation of N's elements is a group automorphism.
inline bool is_automorphism(const FiniteGroup& n, const std::vector<int>& perm) {
  if (perm.size() != n.order()) return false;
  std::vector<bool> hit(n.order());
  for (int x : perm) {
    if (x < 0 || std::size_t(x) >= n.order() || hit[std::size_t(x)]) return false;
    hit[std::size_t(x)] = true;
  }
  for (std::size_t a = 0; a < n.order(); ++a)
    for (std::size_t b = 0; b < n.order(); ++b)
      if (perm[std::size_t(n.mul(int(a), int(b)))] != n.mul(perm[a], perm[b])) return false;
  return true;
}

inline std::vector<int> power_map(const FiniteGroup& n, long long k) {
  std::vector<int> p(n.order());
  for (std::size_t x = 0; x < n.order(); ++x) p[x] = n.power(int(x), k);
  return p;
}

/// The homomorphism P -> Aut(N) determined by images of P's generators,
/// as one permutation of N per element of P. Throws NotAnAction.
inline std::vector<std::vector<int>> extend_action(const FiniteGroup& n, const FiniteGroup& p,
                                                   const std::vector<std::vector<int>>& generator_images) {
  auto gens = p.generators();
  if (p.order() == 1) gens.clear();
  require(generator_images.size() == gens.size(), ErrorCode::NotAnAction,
          "expected " + std::to_string(gens.size()) + " generator images, got " + std::to_string(generator_images.size()));
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (!is_automorphism(n, generator_images[i]))
      fail(ErrorCode::NotAnAction, "image of generator " + p.name(gens[i]) + " is not an automorphism");
  std::vector<int> id(n.order());
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> act(p.order());
  act[0] = id;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int y = p.mul(x, gens[i]);
      std::vector<int> composed(n.order());
      for (std::size_t e = 0; e < n.order(); ++e) composed[e] = act[std::size_t(x)][std::size_t(generator_images[i][e])];
      if (act[std::size_t(y)].empty()) {
        act[std::size_t(y)] = composed;
        queue.push_back(y);
      } else if (act[std::size_t(y)] != composed) {
        fail(ErrorCode::NotAnAction, "generator images do not respect the relations of the acting group");
      }
    }
  }
  for (std::size_t a = 0; a < p.order(); ++a)
    for (std::size_t b = 0; b < p.order(); ++b) {
      const auto& ab = act[std::size_t(p.mul(int(a), int(b)))];
      for (std::size_t e = 0; e < n.order(); ++e)
        if (ab[e] != act[a][std::size_t(act[b][e])]) fail(ErrorCode::NotAnAction, "action is not a homomorphism");
    }
  return act;
}

/// N x| P with (n1, p1)(n2, p2) = (n1 tau(p1)(n2), p1 p2); index n + |N| p.
inline FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& p,
                                      const std::vector<std::vector<int>>& generator_images) {
  auto act = extend_action(n, p, generator_images);
  const std::size_t nn = n.order(), total = nn * p.order();
  if (total > max_group_order()) fail(ErrorCode::OrderTooLarge, "semidirect product of order " + std::to_string(total));
  std::vector<std::vector<int>> t(total, std::vector<int>(total));
  std::vector<std::string> names;
  for (std::size_t i = 0; i < total; ++i) {
    int in = int(i % nn), ip = int(i / nn);
    names.push_back(i == 0 ? "e" : "(" + n.name(in) + "," + p.name(ip) + ")");
    for (std::size_t j = 0; j < total; ++j) {
      int jn = int(j % nn), jp = int(j / nn);
      int prod_n = n.mul(in, act[std::size_t(ip)][std::size_t(jn)]);
      t[i][j] = prod_n + int(nn) * p.mul(ip, jp);
    }
  }
  return FiniteGroup(t, names, false);
}

/// Same automorphism (x -> x^k) for every generator of P.
inline FiniteGroup semidirect_power(const FiniteGroup& n, const FiniteGroup& p, long long k) {
  auto gens = p.order() == 1 ? std::vector<int>{} : p.generators();
  return semidirect_product(n, p, std::vector<std::vector<int>>(gens.size(), power_map(n, k)));
}

namespace detail {

class GroupParser {
 public:
  explicit GroupParser(std::string text) : s_(std::move(text)) {}

  FiniteGroup parse() {
    FiniteGroup g = product();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return g;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::ParseError, msg + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) error(std::string("expected '") + c + "'");
    ++pos_;
  }
  long long number() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 6) error("expected a number");
    long long v = std::stoll(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  FiniteGroup product() {
    FiniteGroup g = atom();
    while (peek('x')) {
      ++pos_;
      g = direct_product(g, atom());
    }
    return g;
  }

  FiniteGroup atom() {
    skip();
    if (peek('(')) {
      ++pos_;
      FiniteGroup g = product();
      expect(')');
      return g;
    }
    if (pos_ < s_.size() && s_[pos_] == '1') {
      ++pos_;
      return cyclic_group(1);
    }
    std::size_t start = pos_;
    std::string id = identifier();
    if (id.empty()) error("expected a group expression");
    if (peek('(')) {
      ++pos_;
      FiniteGroup g = call(id);
      expect(')');
      return g;
    }
    // shorthand such as C_4, D_8, Q_8, SD_16, S_3, A_4, V_4 (subscript = order or degree)
    std::string head = id;
    if (!head.empty() && head.back() == '_') head.pop_back();
    if (head == "trivial") return cyclic_group(1);
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      pos_ = start;
      error("unknown group name '" + id + "'");
    }
    long long v = number();
    if (v < 1) error("group subscript must be positive");
    auto n = static_cast<std::size_t>(v);
    if (head == "C") return cyclic_group(n);
    if (head == "D") return dihedral_of_order(n);
    if (head == "Q") return quaternionic_group(log2_exact(n, "Q_n"));
    if (head == "SD") return semidihedral_group(log2_exact(n, "SD_n"));
    if (head == "S") return symmetric_group(n);
    if (head == "A") return alternating_group(n);
    if (head == "V" && n == 4) return direct_product(cyclic_group(2), cyclic_group(2));
    pos_ = start;
    error("unknown group name '" + id + "'");
  }

  unsigned log2_exact(std::size_t n, const std::string& what) {
    unsigned e = 0;
    while ((std::size_t{1} << e) < n) ++e;
    if ((std::size_t{1} << e) != n) fail(ErrorCode::InvalidPresentation, what + " needs a power-of-two order");
    return e;
  }

  FiniteGroup call(const std::string& id) {
    if (id == "cyclic") return cyclic_group(positive());
    if (id == "dihedral") return dihedral_group(unsigned(positive()));
    if (id == "semidihedral") return semidihedral_group(unsigned(positive()));
    if (id == "quaternionic") return quaternionic_group(unsigned(positive()));
    if (id == "dihedral_order") return dihedral_of_order(positive());
    if (id == "symmetric") return symmetric_group(positive());
    if (id == "alternating") return alternating_group(positive());
    if (id == "direct" || id == "direct_product") {
      FiniteGroup a = product();
      expect(',');
      FiniteGroup b = product();
      return direct_product(a, b);
    }
    if (id == "semidirect" || id == "semidirect_product") {
      FiniteGroup n = product();
      expect(',');
      FiniteGroup p = product();
      expect(',');
      return semidirect_with(n, p);
    }
    error("unknown constructor '" + id + "'");
  }

  std::size_t positive() {
    long long v = number();
    if (v < 1) fail(ErrorCode::InvalidPresentation, "parameter must be positive");
    return static_cast<std::size_t>(v);
  }

  FiniteGroup semidirect_with(const FiniteGroup& n, const FiniteGroup& p) {
    skip();
    if (peek('[')) {
      ++pos_;
      std::vector<std::vector<int>> images;
      while (!peek(']')) {
        expect('[');
        std::vector<int> perm;
        while (!peek(']')) {
          perm.push_back(int(number()));
          if (peek(',')) ++pos_;
        }
        ++pos_;
        images.push_back(perm);
        if (peek(',')) ++pos_;
      }
      ++pos_;
      return semidirect_product(n, p, images);
    }
    std::string tau = identifier();
    if (tau == "trivial") return semidirect_power(n, p, 1);
    if (tau == "inv") {
      if (!n.is_abelian()) fail(ErrorCode::NotAnAction, "inversion is an automorphism only of abelian groups");
      return semidirect_power(n, p, -1);
    }
    if (tau == "pow") {
      expect('(');
      long long k = number();
      expect(')');
      return semidirect_power(n, p, k);
    }
    error("unknown action '" + tau + "' (expected trivial, inv, pow(k) or a list of permutations)");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses constructor expressions such as "semidirect(cyclic(3),cyclic(2),inv)",
/// "direct(C_2,C_2)", "C_3 x Q_8", "dihedral(4)".
inline FiniteGroup parse_group(const std::string& text) { return detail::GroupParser(text).parse(); }

}  // namespace unil
