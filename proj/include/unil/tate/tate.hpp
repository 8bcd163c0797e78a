#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "unil/core/abelian.hpp"
#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/core/lattice.hpp"
#include "unil/core/matrix.hpp"
#include "unil/core/smith.hpp"
#include "unil/rings/constructions.hpp"
#include "unil/rings/ring.hpp"

namespace unil {

/// The additive C_2-module underlying a ring with involution.
struct InvolutiveModule {
  BasePID base;
  std::size_t rank = 0;
  Mat sigma;

  static InvolutiveModule of(const InvolutiveRing& r) { return {r.base(), r.rank(), r.involution()}; }

  void validate() const {
    require(sigma.rows() == rank && sigma.cols() == rank, ErrorCode::InvalidArgument, "involution matrix has wrong shape");
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j)
        require(base.contains(sigma(i, j)), ErrorCode::InvalidArgument, "involution entry outside the base");
    require(matrices_equal(embed_matrix(sigma * sigma, base), Mat::identity(rank, base.one())), ErrorCode::InvalidArgument,
            "involution does not square to the identity");
  }
};

inline int tate_sign(int j) { return (j % 2 == 0) ? 1 : -1; }

/// H^j = {a = eps sigma(a)} / {b + eps sigma(b)}, eps = (-1)^j. Every component
/// has order 2; over F_{2^k} each free copy of F_{2^k} gives k components.
struct TateGroup {
  FgAbelianGroup value;
  int parity = 0;
  std::vector<Vec> representatives;
  std::optional<LatticeQuotient> quotient;

  std::size_t dimension() const { return representatives.size(); }

  /// F_2-coordinates of the class of a cocycle.
  Vec coordinates(const Vec& cocycle) const {
    Vec out;
    for (const auto& c : quotient->coordinates(cocycle)) out.push_back(c % 2 != 0 ? BasePID::f2().one() : BasePID::f2().zero());
    return out;
  }
};

inline TateGroup tate_cohomology(const InvolutiveModule& m, int j) {
  m.validate();
  const BasePID& base = m.base;
  const Scalar eps(tate_sign(j));
  Mat id = Mat::identity(m.rank, base.one());
  Mat minus = embed_matrix(m.sigma - eps * id, base);
  Mat plus = embed_matrix(id + eps * m.sigma, base);
  Lattice cocycles = Lattice::kernel(base, minus);
  Lattice coboundaries = Lattice::image(base, plus);
  TateGroup t;
  t.parity = ((j % 2) + 2) % 2;
  t.quotient.emplace(cocycles, coboundaries);
  t.value = t.quotient->group();
  for (const auto& c : t.quotient->components()) {
    require(c.modulus == 2, ErrorCode::VerificationFailed, "Tate cohomology component of order " + c.modulus.str());
    t.representatives.push_back(c.representative);
  }
  return t;
}

inline TateGroup tate_cohomology(const InvolutiveRing& r, int j) { return tate_cohomology(InvolutiveModule::of(r), j); }

/// Matrices over F_2 for maps between Tate groups.
inline BasePID f2_base() { return BasePID::f2(); }

inline std::size_t f2_rank(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return smith_normal_form(embed_matrix(m, f2_base()), f2_base()).rank;
}

/// Additive map of modules (target rank x source rank); entries are read in the
/// target base, so reduction into characteristic 2 is allowed.
inline bool is_equivariant(const InvolutiveModule& source, const InvolutiveModule& target, const Mat& f) {
  if (f.rows() != target.rank || f.cols() != source.rank) return false;
  return matrices_equal(embed_matrix(f * source.sigma, target.base), embed_matrix(target.sigma * f, target.base));
}

/// The map H^j(source) -> H^j(target) on F_2-coordinates.
inline Mat induced_map(const InvolutiveModule& source, const InvolutiveModule& target, const Mat& f, int j,
                       const TateGroup& hs, const TateGroup& ht) {
  require(is_equivariant(source, target, f), ErrorCode::NotEquivariant, "map does not commute with the involutions");
  Mat out(ht.dimension(), hs.dimension(), BasePID::f2().zero());
  for (std::size_t c = 0; c < hs.dimension(); ++c) {
    Vec img = embed_vector(f.apply(hs.representatives[c]), target.base);
    out.set_col(c, ht.coordinates(img));
  }
  // independence of representatives: coboundaries go to coboundaries
  const Scalar eps(tate_sign(j));
  for (std::size_t i = 0; i < source.rank; ++i) {
    Vec e = unit_vector(source.rank, i);
    Vec b = embed_vector(add(e, scale(eps, source.sigma.apply(e))), source.base);
    Vec img = embed_vector(f.apply(b), target.base);
    require(ht.quotient->is_zero_class(img), ErrorCode::VerificationFailed, "induced map is not well defined");
  }
  return out;
}

inline Mat induced_map(const RingMap& f, int j) {
  auto s = InvolutiveModule::of(*f.source), t = InvolutiveModule::of(*f.target);
  return induced_map(s, t, f.matrix, j, tate_cohomology(s, j), tate_cohomology(t, j));
}

inline bool is_f2_isomorphism(const Mat& m) { return m.rows() == m.cols() && f2_rank(m) == m.rows(); }

// ---------------------------------------------------------------- 2 invertible

struct VanishingReport {
  std::string ring;
  FgAbelianGroup even, odd;
  bool vanishes = false;
  std::size_t witnesses_checked = 0;
};

/// With 2 a unit every cocycle a is the coboundary of b = a/2.
inline VanishingReport verify_vanishing_2_invertible(const InvolutiveRing& a) {
  require(a.base().two_invertible(), ErrorCode::TwoNotInvertible, "2 is not invertible in " + a.base().name());
  VanishingReport rep;
  rep.ring = a.name();
  auto m = InvolutiveModule::of(a);
  TateGroup h0 = tate_cohomology(m, 0), h1 = tate_cohomology(m, 1);
  rep.even = h0.value;
  rep.odd = h1.value;
  for (int j = 0; j < 2; ++j) {
    const Scalar eps(tate_sign(j));
    Lattice cocycles = Lattice::kernel(a.base(), embed_matrix(m.sigma - eps * Mat::identity(m.rank), a.base()));
    for (std::size_t i = 0; i < cocycles.rank(); ++i) {
      Vec x = cocycles.basis_vector(i);
      Vec b = scale(Scalar(Rational(1, 2)), x);
      Vec back = embed_vector(add(b, scale(eps, m.sigma.apply(b))), a.base());
      require(vectors_equal(back, x), ErrorCode::VerificationFailed, "b = a/2 is not a witness");
      ++rep.witnesses_checked;
    }
  }
  rep.vanishes = h0.value.is_trivial() && h1.value.is_trivial();
  return rep;
}

// ---------------------------------------------------------------- localization

struct LocalizationReport {
  std::string ring;
  std::uint64_t n = 1;
  FgAbelianGroup before[2], after[2];
  bool isomorphism[2] = {false, false};
  bool ok() const { return isomorphism[0] && isomorphism[1]; }
};

/// H^j(A) -> H^j(A[1/N]) for N odd, induced by the inclusion.
inline LocalizationReport verify_localization_iso(const InvolutiveRing& a, std::uint64_t n) {
  require(n % 2 == 1, ErrorCode::InvalidArgument, "N must be odd");
  require(a.base().kind() == BasePID::Kind::Integers, ErrorCode::InvalidArgument, "ring must be defined over Z");
  LocalizationReport rep;
  rep.ring = a.name();
  rep.n = n;
  const BasePID loc = n == 1 ? BasePID::integers() : BasePID::localized(n);
  InvolutiveRing b = change_base(a, loc);
  auto ms = InvolutiveModule::of(a), mt = InvolutiveModule::of(b);
  Mat id = Mat::identity(a.rank());
  for (int j = 0; j < 2; ++j) {
    TateGroup hs = tate_cohomology(ms, j), ht = tate_cohomology(mt, j);
    rep.before[j] = hs.value;
    rep.after[j] = ht.value;
    rep.isomorphism[j] = is_f2_isomorphism(induced_map(ms, mt, id, j, hs, ht));
  }
  return rep;
}

// ---------------------------------------------------------------- Mayer-Vietoris

namespace detail {

/// Some x with m x = v over the base, chosen through the Smith form.
inline std::optional<Vec> solve(const Mat& m, const Vec& v, const BasePID& base) {
  const std::size_t cols = m.cols();
  if (m.rows() == 0) return Vec(cols, base.zero());
  SmithForm s = smith_normal_form(embed_matrix(m, base), base);
  Vec uv = embed_vector(s.U.apply(v), base);
  Vec y(cols, base.zero());
  for (std::size_t i = 0; i < uv.size(); ++i) {
    if (i < s.rank) {
      Scalar q = uv[i] / s.D(i, i);
      if (!base.contains(q)) return std::nullopt;
      y[i] = base.embed(q);
    } else if (!uv[i].is_zero()) {
      return std::nullopt;
    }
  }
  return embed_vector(s.V.apply(y), base);
}

struct SquareModules {
  InvolutiveModule a, bc, d;
  Mat phi;  // A -> B + C
  Mat psi;  // B + C -> D, (x, y) -> g_B x - g_C y
};

inline SquareModules square_modules(const CartesianSquare& sq) {
  SquareModules out;
  out.a = InvolutiveModule::of(*sq.a);
  out.d = InvolutiveModule::of(*sq.d);
  const std::size_t nb = sq.b->rank(), nc = sq.c->rank(), nd = sq.d->rank(), na = sq.a->rank();
  out.bc = {sq.b->base(), nb + nc, Mat::block_diagonal(sq.b->involution(), sq.c->involution())};
  out.phi = Mat(nb + nc, na, Scalar(0));
  for (std::size_t j = 0; j < na; ++j) {
    for (std::size_t i = 0; i < nb; ++i) out.phi(i, j) = sq.a_to_b.matrix(i, j);
    for (std::size_t i = 0; i < nc; ++i) out.phi(nb + i, j) = sq.a_to_c.matrix(i, j);
  }
  out.psi = Mat(nd, nb + nc, Scalar(0));
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nb; ++j) out.psi(i, j) = sq.b_to_d.matrix(i, j);
    for (std::size_t j = 0; j < nc; ++j) out.psi(i, nb + j) = -sq.c_to_d.matrix(i, j);
  }
  return out;
}

/// A preimage under psi of a vector of D: over the same base directly, and
/// through F_2 (then lifting bits to 0/1) when D is the reduction mod 2.
inline Vec lift_through_psi(const SquareModules& m, const Vec& z) {
  if (m.d.base == m.bc.base) {
    auto w = solve(m.psi, z, m.bc.base);
    require(w.has_value(), ErrorCode::NotExact, "B + C -> D is not surjective");
    return *w;
  }
  auto w = solve(embed_matrix(m.psi, m.d.base), z, m.d.base);
  require(w.has_value(), ErrorCode::NotExact, "B + C -> D is not surjective");
  Vec out;
  for (const auto& x : *w) out.push_back(Scalar(static_cast<long long>(x.bits())));
  return out;
}

}  // namespace detail

/// The connecting map H^{j+1}(D) -> H^j(A) of 0 -> A -> B + C -> D -> 0.
inline Mat connecting_map(const CartesianSquare& sq, int j) {
  require(sq.verified_pullback && sq.surjective_to_d, ErrorCode::NotExact, "square is not cartesian with D surjected onto");
  auto m = detail::square_modules(sq);
  TateGroup hd = tate_cohomology(m.d, j + 1), ha = tate_cohomology(m.a, j);
  const Scalar eps(tate_sign(j));
  Mat out(ha.dimension(), hd.dimension(), BasePID::f2().zero());
  for (std::size_t c = 0; c < hd.dimension(); ++c) {
    Vec w = detail::lift_through_psi(m, hd.representatives[c]);
    Vec v = embed_vector(add(w, scale(eps, m.bc.sigma.apply(w))), m.bc.base);
    auto a = detail::solve(m.phi, v, m.a.base);
    require(a.has_value(), ErrorCode::NotExact, "w + eps sigma(w) does not come from A");
    out.set_col(c, ha.coordinates(*a));
  }
  return out;
}

struct ExactnessSpot {
  std::string name;
  FgAbelianGroup group;
  std::size_t kernel_dim = 0, image_dim = 0;
  bool exact = false;
};

struct MayerVietorisReport {
  std::string square;
  std::vector<ExactnessSpot> spots;
  bool exact() const {
    for (const auto& s : spots)
      if (!s.exact) return false;
    return !spots.empty();
  }
};

namespace detail {

/// Exactness at the middle of in -> M -> out, compared as subspaces of M's F_2-coordinates.
inline ExactnessSpot exactness_at(const std::string& name, const FgAbelianGroup& g, std::size_t dim, const Mat& in,
                                  const Mat& out) {
  const BasePID f2 = f2_base();
  ExactnessSpot s;
  s.name = name;
  s.group = g;
  Lattice image = in.cols() == 0 || dim == 0 ? Lattice::span(f2, dim, Mat(0, dim))
                                             : Lattice::image(f2, embed_matrix(in, f2));
  Lattice kernel = out.rows() == 0 ? Lattice::full(f2, dim) : Lattice::kernel(f2, embed_matrix(out, f2));
  s.kernel_dim = kernel.rank();
  s.image_dim = image.rank();
  s.exact = image == kernel;
  return s;
}

inline Mat f2_zero(std::size_t r, std::size_t c) { return Mat(r, c, BasePID::f2().zero()); }

}  // namespace detail

/// Exactness of the hexagon H^j(A) -> H^j(B) + H^j(C) -> H^j(D) -> H^{j-1}(A) -> ...
inline MayerVietorisReport verify_mv_exactness(const CartesianSquare& sq) {
  require(sq.verified_pullback && sq.surjective_to_d, ErrorCode::NotExact, "square is not cartesian with D surjected onto");
  auto m = detail::square_modules(sq);
  MayerVietorisReport rep;
  rep.square = sq.label;
  TateGroup ha[2], hbc[2], hd[2];
  Mat f[2], g[2], del[2];  // del[j]: H^{j+1}(D) -> H^j(A)
  for (int j = 0; j < 2; ++j) {
    ha[j] = tate_cohomology(m.a, j);
    hbc[j] = tate_cohomology(m.bc, j);
    hd[j] = tate_cohomology(m.d, j);
  }
  for (int j = 0; j < 2; ++j) {
    f[j] = induced_map(m.a, m.bc, m.phi, j, ha[j], hbc[j]);
    g[j] = m.d.rank == 0 ? detail::f2_zero(0, hbc[j].dimension()) : induced_map(m.bc, m.d, m.psi, j, hbc[j], hd[j]);
    del[j] = connecting_map(sq, j);
  }
  for (int j = 0; j < 2; ++j) {
    const std::string tag = std::to_string(j);
    const int k = 1 - j;  // j + 1 and j - 1 agree mod 2
    rep.spots.push_back(detail::exactness_at("H" + tag + "(A)", ha[j].value, ha[j].dimension(), del[j], f[j]));
    rep.spots.push_back(detail::exactness_at("H" + tag + "(B)+H" + tag + "(C)", hbc[j].value, hbc[j].dimension(), f[j], g[j]));
    rep.spots.push_back(detail::exactness_at("H" + tag + "(D)", hd[j].value, hd[j].dimension(), g[j], del[k]));
  }
  return rep;
}

}  // namespace unil
