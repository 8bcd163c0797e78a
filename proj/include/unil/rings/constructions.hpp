#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/core/lattice.hpp"
#include "unil/groups/analysis.hpp"
#include "unil/groups/finite_group.hpp"
#include "unil/rings/polynomial.hpp"
#include "unil/rings/ring.hpp"

namespace unil {

inline InvolutiveRing group_ring(const BasePID& base, const FiniteGroup& g, std::string name = "") {
  const std::size_t n = g.order();
  std::vector<SparseVec> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table[i * n + j] = {{static_cast<std::uint32_t>(g.mul(int(i), int(j))), base.one()}};
  Mat inv(n, n, base.zero());
  for (std::size_t i = 0; i < n; ++i) inv(std::size_t(g.inv(int(i))), i) = base.one();
  Vec one(n, base.zero());
  one[0] = base.one();
  if (name.empty()) name = base.name() + "[" + describe_group(g) + "]";
  return InvolutiveRing(base, n, std::move(table), one, inv, name, g.names());
}

/// Group ring over an arbitrary coefficient ring, A (x) Z[G].
inline InvolutiveRing group_ring_over(const InvolutiveRing& a, const FiniteGroup& g, std::string name = "") {
  InvolutiveRing zg = group_ring(a.base(), g);
  if (name.empty()) name = a.name() + "[" + describe_group(g) + "]";
  return tensor_product(a, zg, name);
}

inline std::string cyclotomic_name(const BasePID& base, std::uint64_t m) {
  if (m <= 2) return base.name();
  return base.name() + "[zeta_" + std::to_string(m) + "]";
}

/// base (x) Z[zeta_m] in the power basis 1, z, ..., z^(phi(m)-1), with z -> z^-1.
inline InvolutiveRing cyclotomic_ring(std::uint64_t m, const BasePID& base = BasePID::integers()) {
  require(m >= 1, ErrorCode::InvalidArgument, "cyclotomic index must be positive");
  const IntPoly phi = cyclotomic_polynomial(m);
  const std::size_t r = phi.size() - 1;
  // x^k mod Phi_m for 0 <= k < m
  std::vector<Vec> powers;
  Vec cur(r, Scalar(0));
  cur[0] = Scalar(1);
  for (std::uint64_t k = 0; k < m; ++k) {
    powers.push_back(cur);
    Vec next(r, Scalar(0));
    for (std::size_t i = 0; i + 1 < r; ++i) next[i + 1] = cur[i];
    Scalar top = r ? cur[r - 1] : Scalar(0);
    if (!top.is_zero())
      for (std::size_t i = 0; i < r; ++i) next[i] -= top * Scalar(phi[i]);
    cur = next;
  }
  std::vector<SparseVec> table(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) table[i * r + j] = to_sparse(powers[(i + j) % m]);
  Mat inv(r, r);
  for (std::size_t j = 0; j < r; ++j) inv.set_col(j, powers[(m - j % m) % m]);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < r; ++i) names.push_back(i == 0 ? "1" : i == 1 ? "z" : "z^" + std::to_string(i));
  Vec one(r, Scalar(0));
  one[0] = Scalar(1);
  return InvolutiveRing(base, r, std::move(table), one, inv, cyclotomic_name(base, m), names);
}

/// A ring automorphism given on the basis; checked to be unital, multiplicative,
/// bijective and compatible with the involution.
inline bool is_ring_automorphism(const InvolutiveRing& a, const Mat& m) {
  auto ptr = std::make_shared<const InvolutiveRing>(a);
  RingMap f{ptr, ptr, m};
  return f.check().ok() && is_invertible_over(m, a.base());
}

/// The twisted group ring A o_tau P: basis a_i p, product (a p)(b q) = a tau_p(b) pq,
/// involution (a p)* = tau_{p^-1}(a*) p^-1. tau lists one matrix per element of P.
inline InvolutiveRing twisted_group_ring(const InvolutiveRing& a, const FiniteGroup& p, const std::vector<Mat>& tau,
                                         std::string name = "") {
  const std::size_t ra = a.rank(), np = p.order(), r = ra * np;
  require(tau.size() == np, ErrorCode::NotAnAction, "one automorphism per group element is required");
  const BasePID& base = a.base();
  for (std::size_t x = 0; x < np; ++x)
    require(is_ring_automorphism(a, tau[x]), ErrorCode::NotAnAction,
            "tau(" + p.name(int(x)) + ") is not an automorphism of " + a.name());
  require(matrices_equal(embed_matrix(tau[0], base), Mat::identity(ra, base.one())), ErrorCode::NotAnAction,
          "tau(1) is not the identity");
  for (std::size_t x = 0; x < np; ++x)
    for (std::size_t y = 0; y < np; ++y)
      require(matrices_equal(embed_matrix(tau[x] * tau[y], base), embed_matrix(tau[std::size_t(p.mul(int(x), int(y)))], base)),
              ErrorCode::NotAnAction, "tau is not a homomorphism");
  std::vector<SparseVec> table(r * r);
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t x = 0; x < np; ++x)
      for (std::size_t j = 0; j < ra; ++j)
        for (std::size_t y = 0; y < np; ++y) {
          // e_i x e_j y = e_i tau_x(e_j) xy
          const std::size_t xy = std::size_t(p.mul(int(x), int(y)));
          SparseVec s;
          for (std::size_t l = 0; l < ra; ++l) {
            const Scalar& c = tau[x](l, j);
            if (c.is_zero()) continue;
            for (const auto& t : a.basis_product(i, l))
              s.push_back({static_cast<std::uint32_t>(t.index * np + xy), c * t.coeff});
          }
          table[(i * np + x) * r + (j * np + y)] = std::move(s);
        }
  Mat inv(r, r, base.zero());
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t x = 0; x < np; ++x) {
      const std::size_t xi = std::size_t(p.inv(int(x)));
      Vec img = tau[xi].apply(a.involution().col(i));
      for (std::size_t l = 0; l < ra; ++l) inv(l * np + xi, i * np + x) = img[l];
    }
  Vec one(r, base.zero());
  for (std::size_t i = 0; i < ra; ++i) one[i * np] = a.one()[i];
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t x = 0; x < np; ++x) {
      const std::string& na = a.basis_names()[i];
      const std::string& nx = p.name(int(x));
      names.push_back(x == 0 ? na : na == "1" ? nx : na + "*" + nx);
    }
  if (name.empty()) name = a.name() + " o " + describe_group(p);
  return InvolutiveRing(base, r, std::move(table), one, inv, name, names);
}

/// Extends automorphisms given on generators of P to all of P.
inline std::vector<Mat> extend_ring_action(const InvolutiveRing& a, const FiniteGroup& p, const std::vector<int>& gens,
                                           const std::vector<Mat>& images) {
  require(gens.size() == images.size(), ErrorCode::InvalidArgument, "one image per generator is required");
  const BasePID& base = a.base();
  std::vector<std::optional<Mat>> act(p.order());
  act[0] = Mat::identity(a.rank(), base.one());
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      int y = p.mul(x, gens[i]);
      Mat m = embed_matrix(*act[std::size_t(x)] * images[i], base);
      if (!act[std::size_t(y)]) {
        act[std::size_t(y)] = m;
        queue.push_back(y);
      } else {
        require(matrices_equal(*act[std::size_t(y)], m), ErrorCode::NotAnAction,
                "generator images do not respect the relations of P");
      }
    }
  }
  std::vector<Mat> out;
  for (auto& m : act) {
    require(m.has_value(), ErrorCode::NotAnAction, "generators do not generate P");
    out.push_back(*m);
  }
  return out;
}

// ---------------------------------------------------------------- twisted quadratic extensions

/// The conjugation twist applied to zeta: c sends zeta to zeta^-1, -c to -zeta^-1.
enum class QuadraticTwist { Conjugation, NegativeConjugation };

/// A o (y) with y a y^-1 = tau(a), y^2 = u (u = +-1) and y* = s y^-1.
struct QuadraticExtensionSpec {
  QuadraticTwist twist = QuadraticTwist::Conjugation;
  int square = 1;          // y^2
  int generator_sign = 1;  // s in y* = s y^-1
};

inline std::string quadratic_extension_suffix(const QuadraticExtensionSpec& spec) {
  std::string t = spec.twist == QuadraticTwist::Conjugation ? "o_c" : "o_-c";
  std::string out = t + (spec.square == 1 ? " C2" : " [i]");
  if (spec.generator_sign != 1) out += " sign=-1";
  return out;
}

/// The automorphism of Z[zeta_m] (m a power of 2, m >= 4) induced by the twist.
inline Mat twist_matrix(const InvolutiveRing& zeta_ring, std::uint64_t m, QuadraticTwist twist) {
  Mat c = zeta_ring.involution();
  if (twist == QuadraticTwist::Conjugation) return c;
  // zeta^j -> (-1)^j zeta^-j
  Mat out = c;
  for (std::size_t j = 1; j < out.cols(); j += 2)
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, j) = -out(i, j);
  (void)m;
  return out;
}

inline InvolutiveRing quadratic_extension(const InvolutiveRing& a, const Mat& tau, const QuadraticExtensionSpec& spec,
                                          std::string name = "") {
  const std::size_t ra = a.rank(), r = 2 * ra;
  const BasePID& base = a.base();
  require(spec.square == 1 || spec.square == -1, ErrorCode::InvalidArgument, "y^2 must be 1 or -1");
  require(spec.generator_sign == 1 || spec.generator_sign == -1, ErrorCode::InvalidArgument, "sign must be 1 or -1");
  require(is_ring_automorphism(a, tau), ErrorCode::NotAnAction, "twist is not a ring automorphism");
  require(matrices_equal(embed_matrix(tau * tau, base), Mat::identity(ra, base.one())), ErrorCode::NotAnAction,
          "twist does not have order dividing 2");
  const Scalar u(spec.square), s(spec.generator_sign);
  // basis: e_i (index i) and e_i y (index ra + i)
  std::vector<SparseVec> table(r * r);
  auto put = [&](std::size_t row, std::size_t col, const Vec& v, std::size_t shift) {
    SparseVec sv = to_sparse(v);
    for (auto& t : sv) t.index += static_cast<std::uint32_t>(shift);
    auto& cell = table[row * r + col];
    cell.insert(cell.end(), sv.begin(), sv.end());
  };
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j) {
      Vec ei = a.basis(i), ej = a.basis(j);
      Vec tej = tau.apply(ej);
      put(i, j, a.multiply(ei, ej), 0);                         // e_i e_j
      put(i, ra + j, a.multiply(ei, ej), ra);                   // e_i (e_j y)
      put(ra + i, j, a.multiply(ei, tej), ra);                  // e_i y e_j = e_i tau(e_j) y
      put(ra + i, ra + j, scale(u, a.multiply(ei, tej)), 0);    // e_i y e_j y = u e_i tau(e_j)
    }
  // (e_i y)* = y* e_i* = s u y e_i* = s u tau(e_i*) y
  Mat inv(r, r, base.zero());
  for (std::size_t i = 0; i < ra; ++i) {
    Vec bar = a.involution().col(i);
    for (std::size_t l = 0; l < ra; ++l) inv(l, i) = bar[l];
    Vec tb = scale(s * u, tau.apply(bar));
    for (std::size_t l = 0; l < ra; ++l) inv(ra + l, ra + i) = tb[l];
  }
  Vec one(r, base.zero());
  for (std::size_t i = 0; i < ra; ++i) one[i] = a.one()[i];
  std::vector<std::string> names;
  const char* gen = spec.square == 1 ? "x" : "y";
  for (std::size_t i = 0; i < ra; ++i) names.push_back(a.basis_names()[i]);
  for (std::size_t i = 0; i < ra; ++i)
    names.push_back(a.basis_names()[i] == "1" ? std::string(gen) : a.basis_names()[i] + "*" + gen);
  if (name.empty()) name = a.name() + " " + quadratic_extension_suffix(spec);
  return InvolutiveRing(base, r, std::move(table), one, inv, name, names);
}

/// Z[zeta_m] o_{+-c} C2 or Z[zeta_m] o_c [i], m a power of two.
inline InvolutiveRing cyclotomic_quadratic_extension(std::uint64_t m, const QuadraticExtensionSpec& spec,
                                                     const BasePID& base = BasePID::integers()) {
  require(m >= 2 && is_power_of_two(m), ErrorCode::InvalidArgument, "twisted extensions need a dyadic root of unity");
  InvolutiveRing z = cyclotomic_ring(m, base);
  return quadratic_extension(z, twist_matrix(z, m, spec.twist), spec);
}

// ---------------------------------------------------------------- norm elements, squares

inline Vec norm_element(const FiniteGroup& g, const InvolutiveRing& group_ring_of_g, const Subgroup& k) {
  require(group_ring_of_g.rank() == g.order(), ErrorCode::InvalidArgument, "ring is not the group ring of G");
  require(g.is_subgroup(k), ErrorCode::InvalidArgument, "K is not a subgroup");
  require(g.is_normal(k), ErrorCode::NotNormal, "K is not normal in G");
  Vec v = group_ring_of_g.zero();
  for (int x : k.elements()) v[std::size_t(x)] = group_ring_of_g.base().one();
  return v;
}

/// A commuting square A -> B, A -> C, B -> D, C -> D.
struct CartesianSquare {
  RingPtr a, b, c, d;
  RingMap a_to_b, a_to_c, b_to_d, c_to_d;
  bool commutes = false;
  bool verified_pullback = false;
  bool surjective_to_d = false;
  std::string label;
};

namespace detail {

/// Kernel of B (+) C -> D, (x, y) -> g_B x - g_C y, as a lattice over the base of B and C.
/// D may live over F_2 while B and C live over Z or Z[1/N] with N odd.
inline Lattice difference_kernel(const CartesianSquare& sq) {
  const BasePID& base = sq.b->base();
  const std::size_t nb = sq.b->rank(), nc = sq.c->rank(), nd = sq.d->rank();
  Mat m(nd, nb + nc, Scalar(0));
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nb; ++j) m(i, j) = sq.b_to_d.matrix(i, j);
    for (std::size_t j = 0; j < nc; ++j) m(i, nb + j) = -sq.c_to_d.matrix(i, j);
  }
  if (nd == 0) return Lattice::full(base, nb + nc);
  if (sq.d->base() == base) return Lattice::kernel(base, embed_matrix(m, base));
  require(sq.d->base().is_field() && sq.d->base().field_degree() == 1 && !base.is_field() &&
              !base.is_invertible_prime(2),
          ErrorCode::Unsupported, "mixed-base square must reduce into F2");
  // solutions of m x = 2 y: kernel of [m | 2I], projected to the x block
  Mat big(nd, nb + nc + nd, Scalar(0));
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nb + nc; ++j) big(i, j) = m(i, j);
    big(i, nb + nc + i) = Scalar(-2);
  }
  Lattice k = Lattice::kernel(base, big);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < k.rank(); ++i) {
    Vec v = k.basis_vector(i);
    rows.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nb + nc));
  }
  return Lattice::span(base, nb + nc, rows);
}

inline std::size_t rank_over(const Mat& m, const BasePID& base) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return smith_normal_form(embed_matrix(m, base), base).rank;
}

}  // namespace detail

/// Checks commutativity, that A is the fiber product of B and C over D, and that C -> D is onto.
inline void verify_square(CartesianSquare& sq) {
  sq.commutes = true;
  for (std::size_t j = 0; j < sq.a->rank() && sq.commutes; ++j) {
    Vec e = sq.a->basis(j);
    sq.commutes = vectors_equal(sq.b_to_d.apply(sq.a_to_b.apply(e)), sq.c_to_d.apply(sq.a_to_c.apply(e)));
  }
  const BasePID& base = sq.a->base();
  const std::size_t nb = sq.b->rank(), nc = sq.c->rank();
  Mat into(nb + nc, sq.a->rank(), Scalar(0));
  for (std::size_t j = 0; j < sq.a->rank(); ++j) {
    for (std::size_t i = 0; i < nb; ++i) into(i, j) = sq.a_to_b.matrix(i, j);
    for (std::size_t i = 0; i < nc; ++i) into(nb + i, j) = sq.a_to_c.matrix(i, j);
  }
  Lattice image = Lattice::image(base, embed_matrix(into, base));
  bool injective = image.rank() == sq.a->rank();
  sq.verified_pullback = sq.commutes && injective && image == detail::difference_kernel(sq);
  sq.surjective_to_d = detail::rank_over(sq.c_to_d.matrix, sq.d->base()) == sq.d->rank();
  if (sq.d->base().is_field() && !base.is_field()) {
    // over F2 the rank must be computed after reduction
    sq.surjective_to_d = detail::rank_over(embed_matrix(sq.c_to_d.matrix, sq.d->base()), sq.d->base()) == sq.d->rank();
  }
}

/// The square R[G] -> R[G]/Sigma_K, R[G/K] -> (R/|K|)[G/K] for |K| <= 2.
inline CartesianSquare pullback_square(const BasePID& base, const FiniteGroup& g, const Subgroup& k) {
  require(base.characteristic_zero(), ErrorCode::InvalidArgument, "pullback square needs a base of characteristic zero");
  require(g.is_subgroup(k), ErrorCode::InvalidArgument, "K is not a subgroup");
  require(g.is_normal(k), ErrorCode::NotNormal, "K is not normal in G");
  require(k.order() <= 2, ErrorCode::Unsupported, "only |K| = 1 or 2 is supported (R/|K| must be a base ring)");
  CartesianSquare sq;
  sq.a = make_ring(group_ring(base, g));
  QuotientGroup gk = quotient_by(g, k);
  sq.c = make_ring(group_ring(base, gk.group));
  Vec sigma = norm_element(g, *sq.a, k);
  QuotientRing q = quotient_ring(sq.a, {sigma}, sq.a->name() + "/Sigma_K");
  sq.b = q.ring;
  sq.a_to_b = q.projection;
  Mat ac(gk.group.order(), g.order(), Scalar(0));
  for (std::size_t x = 0; x < g.order(); ++x) ac(std::size_t(gk.projection[x]), x) = Scalar(1);
  sq.a_to_c = {sq.a, sq.c, ac};
  const bool d_zero = k.order() == 1 || base.is_invertible_prime(2);
  if (d_zero) {
    sq.d = make_ring(InvolutiveRing::zero_ring(base));
    sq.b_to_d = {sq.b, sq.d, Mat(0, sq.b->rank())};
    sq.c_to_d = {sq.c, sq.d, Mat(0, sq.c->rank())};
  } else {
    const BasePID f2 = BasePID::f2();
    sq.d = make_ring(group_ring(f2, gk.group));
    sq.c_to_d = {sq.c, sq.d, Mat::identity(gk.group.order())};
    // B -> D through the chosen preimages in A
    Mat bd = ac * q.lift;
    sq.b_to_d = {sq.b, sq.d, bd};
  }
  sq.label = "(" + base.name() + ", " + describe_group(g) + ", K of order " + std::to_string(k.order()) + ")";
  sq.a_to_b.validate();
  sq.a_to_c.validate();
  sq.b_to_d.validate();
  sq.c_to_d.validate();
  verify_square(sq);
  require(sq.commutes && sq.verified_pullback && sq.surjective_to_d, ErrorCode::VerificationFailed,
          "pullback square " + sq.label + " failed verification");
  return sq;
}

// ---------------------------------------------------------------- CRT splittings

struct CrtSplitting {
  RingPtr source;  // base[C_N]
  ProductRing target;
  RingMap map;
  std::vector<std::uint64_t> divisors;
  RingMap::Check check;
  Scalar determinant;
  bool bijective = false;
};

/// T -> (zeta_d)_{d | N}, from base[C_N] to the product of base[zeta_d].
inline CrtSplitting crt_split_cyclic(const BasePID& base, std::uint64_t n) {
  require(n >= 1 && n % 2 == 1, ErrorCode::InvalidArgument, "N must be odd");
  require(!base.is_field() && base.is_unit(Scalar(static_cast<long long>(n))), ErrorCode::NotInvertible,
          std::to_string(n) + " is not invertible in " + base.name());
  CrtSplitting out;
  FiniteGroup cn = cyclic_group(n);
  out.source = make_ring(group_ring(base, cn));
  out.divisors = divisors(n);
  std::vector<RingPtr> factors;
  for (auto d : out.divisors) factors.push_back(make_ring(cyclotomic_ring(d, base)));
  out.target = product_ring(factors);
  std::vector<RingMap> parts;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& z = *factors[k];
    const std::uint64_t d = out.divisors[k];
    // zeta_d^j: power of the generator in the power basis
    Vec zeta = z.rank() > 1 ? z.basis(1) : z.one();
    Mat m(z.rank(), n, base.zero());
    Vec cur = z.one();
    for (std::uint64_t j = 0; j < n; ++j) {
      m.set_col(j, cur);
      cur = z.multiply(cur, zeta);
    }
    (void)d;
    parts.push_back({out.source, factors[k], m});
  }
  out.map = map_into_product(out.source, out.target, parts);
  out.check = out.map.check();
  out.determinant = determinant(out.map.matrix);
  out.bijective = out.map.matrix.is_square() && base.is_unit(out.determinant);
  return out;
}

// ---------------------------------------------------------------- x^(e/2) + 1

struct XPowerSplitting {
  std::uint64_t e = 2;
  Vec omega;                      // primitive e-th root of unity in A
  std::vector<std::uint64_t> exponents;  // odd d, factors x - omega^d
  bool factorization_verified = false;
  RingPtr source;                 // A[x]/(x^(e/2)+1)
  ProductRing target;             // copies of A
  RingMap map;                    // x -> (omega^d)_d
  RingMap::Check check;
  Scalar determinant;
  bool bijective = false;
};

inline std::optional<Vec> find_primitive_root(const InvolutiveRing& a, std::uint64_t e) {
  // omega^(e/2) = -1 characterizes primitive e-th roots for e a power of 2
  const Vec minus_one = a.scalar(Scalar(-1));
  std::vector<Vec> candidates{minus_one};
  for (std::size_t i = 0; i < a.rank(); ++i) {
    Vec b = a.basis(i), p = b;
    for (std::uint64_t k = 1; k <= 2 * e && k < 512; ++k) {
      candidates.push_back(p);
      candidates.push_back(scale(Scalar(-1), p));
      p = a.multiply(p, b);
    }
  }
  for (const auto& c : candidates) {
    Vec w = embed_vector(c, a.base());
    if (vectors_equal(a.power(w, e / 2), minus_one)) return w;
  }
  return std::nullopt;
}

/// A[x]/(f) for monic f with coefficients in the base; x is central and x* = x^-1
/// when x is a unit of finite order (the caller supplies the involution image of x).
inline InvolutiveRing polynomial_quotient(const InvolutiveRing& a, const std::vector<Scalar>& monic, const Vec& x_bar,
                                          std::string name) {
  const std::size_t ra = a.rank(), deg = monic.size() - 1, r = ra * deg;
  const BasePID& base = a.base();
  // x^k mod f as coefficient lists, k < 2 deg
  std::vector<std::vector<Scalar>> xp;
  std::vector<Scalar> cur(deg, Scalar(0));
  cur[0] = Scalar(1);
  for (std::size_t k = 0; k < 2 * deg; ++k) {
    xp.push_back(cur);
    std::vector<Scalar> next(deg, Scalar(0));
    for (std::size_t i = 0; i + 1 < deg; ++i) next[i + 1] = cur[i];
    for (std::size_t i = 0; i < deg; ++i) next[i] -= cur[deg - 1] * monic[i];
    cur = next;
  }
  // basis index i * deg + k stands for e_i x^k
  std::vector<SparseVec> table(r * r);
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t k = 0; k < deg; ++k)
      for (std::size_t j = 0; j < ra; ++j)
        for (std::size_t l = 0; l < deg; ++l) {
          SparseVec s;
          for (const auto& t : a.basis_product(i, j))
            for (std::size_t m = 0; m < deg; ++m)
              if (!xp[k + l][m].is_zero())
                s.push_back({static_cast<std::uint32_t>(t.index * deg + m), t.coeff * xp[k + l][m]});
          table[(i * deg + k) * r + (j * deg + l)] = std::move(s);
        }
  Vec one(r, base.zero());
  for (std::size_t i = 0; i < ra; ++i) one[i * deg] = a.one()[i];
  // involution: (e_i x^k)* = (x*)^k e_i*
  auto mul_vec = [&](const Vec& u, const Vec& v) {
    Vec out(r, base.zero());
    for (std::size_t p = 0; p < r; ++p) {
      if (u[p].is_zero()) continue;
      for (std::size_t q = 0; q < r; ++q) {
        if (v[q].is_zero()) continue;
        for (const auto& t : table[p * r + q]) out[t.index] += u[p] * v[q] * t.coeff;
      }
    }
    return out;
  };
  Mat inv(r, r, base.zero());
  for (std::size_t i = 0; i < ra; ++i) {
    Vec bar(r, base.zero());
    for (std::size_t l = 0; l < ra; ++l) bar[l * deg] = a.involution()(l, i);
    Vec xk = one;
    for (std::size_t k = 0; k < deg; ++k) {
      inv.set_col(i * deg + k, mul_vec(xk, bar));
      xk = mul_vec(xk, x_bar);
    }
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t k = 0; k < deg; ++k) {
      std::string xs = k == 0 ? "" : k == 1 ? "x" : "x^" + std::to_string(k);
      const std::string& na = a.basis_names()[i];
      names.push_back(k == 0 ? na : na == "1" ? xs : na + "*" + xs);
    }
  return InvolutiveRing(base, r, std::move(table), one, inv, std::move(name), names);
}

/// x^(e/2) + 1 = prod_{odd d < e} (x - omega^d) over A, and the CRT map
/// A[x]/(x^(e/2)+1) -> prod A, x -> omega^d. A must be commutative with
/// omega* = omega^-1.
inline XPowerSplitting factor_x_power_plus_one(std::uint64_t e, const RingPtr& a) {
  require(e >= 2 && is_power_of_two(e), ErrorCode::InvalidArgument, "e must be a power of 2, at least 2");
  require(a->is_commutative(), ErrorCode::InvalidArgument, "coefficient ring must be commutative");
  XPowerSplitting out;
  out.e = e;
  auto omega = find_primitive_root(*a, e);
  require(omega.has_value(), ErrorCode::MissingRoot, a->name() + " has no primitive " + std::to_string(e) + "-th root of unity");
  out.omega = *omega;
  const std::uint64_t h = e / 2;
  std::vector<Vec> roots;
  for (std::uint64_t d = 1; d < e; d += 2) {
    out.exponents.push_back(d);
    roots.push_back(a->power(out.omega, d));
  }
  // expand prod (x - r) with coefficients in A
  std::vector<Vec> poly{a->one()};
  for (const auto& root : roots) {
    std::vector<Vec> next(poly.size() + 1, a->zero());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = a->add(next[i + 1], poly[i]);
      next[i] = a->sub(next[i], a->multiply(root, poly[i]));
    }
    poly = std::move(next);
  }
  out.factorization_verified = poly.size() == h + 1;
  for (std::size_t i = 0; i <= h && out.factorization_verified; ++i) {
    Vec expect = (i == 0 || i == h) ? a->one() : a->zero();
    out.factorization_verified = vectors_equal(poly[i], expect);
  }
  require(out.factorization_verified, ErrorCode::VerificationFailed, "x^(e/2)+1 does not split as claimed");
  std::vector<Scalar> monic(h + 1, Scalar(0));
  monic[0] = Scalar(1);
  monic[h] = Scalar(1);
  // x* = x^-1 = -x^(h-1)
  const std::size_t r = a->rank() * h;
  Vec x_bar(r, a->base().zero());
  if (h == 1) {
    x_bar[0] = Scalar(-1);
  } else {
    for (std::size_t i = 0; i < a->rank(); ++i) x_bar[i * h + (h - 1)] = -a->one()[i];
  }
  out.source = make_ring(polynomial_quotient(*a, monic, x_bar, a->name() + "[x]/(x^" + std::to_string(h) + "+1)"));
  // conjugation sends omega^d to omega^-d, matching x* = x^-1, so the plain product works
  std::vector<RingPtr> copies(h, a);
  out.target = product_ring(copies);
  const std::size_t ra = a->rank();
  Mat m(r, r, a->base().zero());
  for (std::size_t k = 0; k < h; ++k) {
    Vec rootpow = a->one();
    for (std::size_t l = 0; l < h; ++l) {
      for (std::size_t i = 0; i < ra; ++i) {
        Vec img = a->multiply(a->basis(i), rootpow);  // e_i x^l -> e_i omega^(d l)
        for (std::size_t t = 0; t < ra; ++t) m(k * ra + t, i * h + l) = img[t];
      }
      rootpow = a->multiply(rootpow, roots[k]);
    }
  }
  out.map = {out.source, out.target.ring, m};
  out.check = out.map.check();
  out.determinant = determinant(m);
  out.bijective = a->base().is_unit(a->base().embed(out.determinant));
  return out;
}

// ---------------------------------------------------------------- radical

struct RadicalNilpotency {
  std::size_t index = 1;                // smallest n with J^n = 0
  std::vector<std::size_t> dimensions;  // dim J^1, J^2, ..., ending with 0
};

/// Nilpotency index of the augmentation ideal of F_{2^k}[P] for a 2-group P.
inline RadicalNilpotency radical_nilpotency(const BasePID& base, const FiniteGroup& p) {
  require(base.is_field(), ErrorCode::InvalidArgument, "base must be a field of characteristic 2");
  require(is_power_of_two(p.order()), ErrorCode::NotA2Group, "group order " + std::to_string(p.order()) + " is not a power of 2");
  InvolutiveRing r = group_ring(base, p);
  const std::size_t n = p.order();
  std::vector<Vec> gens;
  for (std::size_t x = 1; x < n; ++x) {
    Vec v = r.zero();
    v[x] = base.one();
    v[0] = base.one();
    gens.push_back(v);
  }
  RadicalNilpotency out;
  Lattice j = Lattice::span(base, n, gens);
  std::vector<int> pg = n == 1 ? std::vector<int>{} : p.generators();
  Lattice cur = j;
  out.index = 1;
  while (cur.rank() > 0) {
    out.dimensions.push_back(cur.rank());
    std::vector<Vec> next;
    for (std::size_t i = 0; i < cur.rank(); ++i) {
      Vec x = cur.basis_vector(i);
      for (int s : pg) {
        Vec sm = r.zero();
        sm[std::size_t(s)] = base.one();
        sm[0] = base.one();
        Vec xs = r.multiply(x, sm);
        for (std::size_t g = 0; g < n; ++g) next.push_back(r.multiply(xs, r.basis(g)));
      }
    }
    cur = Lattice::span(base, n, next.empty() ? std::vector<Vec>{} : next);
    ++out.index;
  }
  out.dimensions.push_back(0);
  return out;
}

}  // namespace unil
