#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/core/lattice.hpp"
#include "unil/core/matrix.hpp"
#include "unil/core/smith.hpp"

namespace unil {

struct Term {
  std::uint32_t index;
  Scalar coeff;
};
using SparseVec = std::vector<Term>;

inline SparseVec to_sparse(const Vec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) out.push_back({static_cast<std::uint32_t>(i), v[i]});
  return out;
}

/// Merges like terms and drops zeros; input order is irrelevant.
inline SparseVec normalize_sparse(SparseVec v) {
  std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.index < b.index; });
  SparseVec out;
  for (auto& t : v) {
    if (!out.empty() && out.back().index == t.index)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff.is_zero(); }), out.end());
  return out;
}

inline bool sparse_equal(const SparseVec& a, const SparseVec& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].index != b[i].index || !(a[i].coeff == b[i].coeff)) return false;
  return true;
}

/// A ring with involution, free of finite rank over a base PID, given by the
/// products of basis elements, the unit and the matrix of the involution
/// (column j is the image of basis element j).
class InvolutiveRing {
 public:
  InvolutiveRing(BasePID base, std::size_t rank, std::vector<SparseVec> table, Vec one, Mat involution,
                 std::string name = "", std::vector<std::string> basis_names = {}, bool verify = true)
      : base_(std::move(base)),
        rank_(rank),
        table_(std::move(table)),
        one_(std::move(one)),
        involution_(std::move(involution)),
        name_(std::move(name)),
        basis_names_(std::move(basis_names)) {
    require(table_.size() == rank_ * rank_, ErrorCode::InvalidArgument, "structure constant table has wrong size");
    require(one_.size() == rank_, ErrorCode::InvalidArgument, "unit has wrong length");
    require(involution_.rows() == rank_ && involution_.cols() == rank_, ErrorCode::InvalidArgument,
            "involution matrix has wrong shape");
    for (auto& entry : table_) {
      for (auto& t : entry) {
        require(t.index < rank_, ErrorCode::InvalidArgument, "structure constant index out of range");
        t.coeff = base_.embed(t.coeff);
      }
      entry = normalize_sparse(std::move(entry));
    }
    one_ = embed_vector(one_, base_);
    involution_ = embed_matrix(involution_, base_);
    if (basis_names_.size() != rank_) {
      basis_names_.clear();
      for (std::size_t i = 0; i < rank_; ++i) basis_names_.push_back("b" + std::to_string(i));
    }
    if (verify) verify_axioms();
  }

  /// Dense structure constants: mul[i][j] is the coordinate vector of e_i e_j.
  static InvolutiveRing from_dense(const BasePID& base, const std::vector<std::vector<Vec>>& mul, const Vec& one,
                                   const Mat& involution, std::string name = "",
                                   std::vector<std::string> basis_names = {}) {
    const std::size_t r = one.size();
    std::vector<SparseVec> table(r * r);
    require(mul.size() == r, ErrorCode::InvalidArgument, "structure constants have wrong shape");
    for (std::size_t i = 0; i < r; ++i) {
      require(mul[i].size() == r, ErrorCode::InvalidArgument, "structure constants have wrong shape");
      for (std::size_t j = 0; j < r; ++j) {
        require(mul[i][j].size() == r, ErrorCode::InvalidArgument, "structure constants have wrong shape");
        table[i * r + j] = to_sparse(mul[i][j]);
      }
    }
    return InvolutiveRing(base, r, std::move(table), one, involution, std::move(name), std::move(basis_names));
  }

  static InvolutiveRing zero_ring(const BasePID& base) {
    return InvolutiveRing(base, 0, {}, {}, Mat(0, 0), "0", {});
  }

  const BasePID& base() const { return base_; }
  std::size_t rank() const { return rank_; }
  const Vec& one() const { return one_; }
  const Mat& involution() const { return involution_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const std::vector<std::string>& basis_names() const { return basis_names_; }
  const SparseVec& basis_product(std::size_t i, std::size_t j) const { return table_[i * rank_ + j]; }

  Vec zero() const { return Vec(rank_, base_.zero()); }
  Vec basis(std::size_t i) const {
    Vec v = zero();
    v[i] = base_.one();
    return v;
  }
  Vec scalar(const Scalar& s) const { return scale(base_.embed(s), one_); }

  Vec multiply(const Vec& a, const Vec& b) const {
    Vec out = zero();
    for (std::size_t i = 0; i < rank_; ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < rank_; ++j) {
        if (b[j].is_zero()) continue;
        Scalar ab = a[i] * b[j];
        for (const auto& t : table_[i * rank_ + j]) out[t.index] += ab * t.coeff;
      }
    }
    return out;
  }

  Vec power(const Vec& a, std::uint64_t k) const {
    Vec out = one_;
    for (std::uint64_t i = 0; i < k; ++i) out = multiply(out, a);
    return out;
  }

  Vec involute(const Vec& a) const { return embed_vector(involution_.apply(a), base_); }

  Vec add(const Vec& a, const Vec& b) const { return embed_vector(unil::add(a, b), base_); }
  Vec sub(const Vec& a, const Vec& b) const { return embed_vector(subtract(a, b), base_); }

  /// Matrix of x -> a x (columns are a e_j).
  Mat left_multiplication(const Vec& a) const {
    Mat m(rank_, rank_, base_.zero());
    for (std::size_t j = 0; j < rank_; ++j) m.set_col(j, multiply(a, basis(j)));
    return m;
  }
  Mat right_multiplication(const Vec& a) const {
    Mat m(rank_, rank_, base_.zero());
    for (std::size_t j = 0; j < rank_; ++j) m.set_col(j, multiply(basis(j), a));
    return m;
  }

  bool is_central(const Vec& a) const {
    for (std::size_t j = 0; j < rank_; ++j)
      if (!vectors_equal(multiply(a, basis(j)), multiply(basis(j), a))) return false;
    return true;
  }

  bool is_commutative() const {
    for (std::size_t i = 0; i < rank_; ++i)
      for (std::size_t j = i + 1; j < rank_; ++j)
        if (!sparse_equal(table_[i * rank_ + j], table_[j * rank_ + i])) return false;
    return true;
  }

  std::string element_str(const Vec& v) const {
    std::string out;
    for (std::size_t i = 0; i < rank_; ++i) {
      if (v[i].is_zero()) continue;
      std::string c = v[i].str();
      if (!out.empty()) out += c[0] == '-' ? " - " : " + ";
      else if (c[0] == '-') out += "-";
      if (c[0] == '-') c = c.substr(1);
      if (c != "1") out += c + "*";
      out += basis_names_[i];
    }
    return out.empty() ? "0" : out;
  }

  /// Full enumeration of the ring and involution axioms on basis elements.
  void verify_axioms() const {
    const std::size_t r = rank_;
    // e_i (e_j e_k) = (e_i e_j) e_k
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k) {
          SparseVec left, right;
          for (const auto& t : table_[i * r + j])
            for (const auto& u : table_[t.index * r + k]) left.push_back({u.index, t.coeff * u.coeff});
          for (const auto& t : table_[j * r + k])
            for (const auto& u : table_[i * r + t.index]) right.push_back({u.index, t.coeff * u.coeff});
          if (!sparse_equal(normalize_sparse(std::move(left)), normalize_sparse(std::move(right))))
            fail(ErrorCode::VerificationFailed, name_ + ": multiplication is not associative at basis triple (" +
                                                    std::to_string(i) + "," + std::to_string(j) + "," +
                                                    std::to_string(k) + ")");
        }
    for (std::size_t i = 0; i < r; ++i) {
      Vec e = basis(i);
      if (!vectors_equal(multiply(one_, e), e) || !vectors_equal(multiply(e, one_), e))
        fail(ErrorCode::VerificationFailed, name_ + ": unit law fails at basis element " + std::to_string(i));
    }
    // sigma^2 = id, sigma(1) = 1, sigma(e_i e_j) = sigma(e_j) sigma(e_i)
    Mat sq = involution_ * involution_;
    if (!matrices_equal(embed_matrix(sq, base_), Mat::identity(r, base_.one())))
      fail(ErrorCode::VerificationFailed, name_ + ": involution does not square to the identity");
    if (!vectors_equal(involute(one_), one_))
      fail(ErrorCode::VerificationFailed, name_ + ": involution does not fix the unit");
    std::vector<Vec> images(r);
    for (std::size_t i = 0; i < r; ++i) images[i] = involution_.col(i);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Vec prod = zero();
        for (const auto& t : table_[i * r + j]) {
          const Vec& img = images[t.index];
          for (std::size_t l = 0; l < r; ++l)
            if (!img[l].is_zero()) prod[l] += t.coeff * img[l];
        }
        if (!vectors_equal(embed_vector(prod, base_), multiply(images[j], images[i])))
          fail(ErrorCode::VerificationFailed, name_ + ": involution is not anti-multiplicative at (" +
                                                  std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }

 private:
  BasePID base_;
  std::size_t rank_ = 0;
  std::vector<SparseVec> table_;
  Vec one_;
  Mat involution_;
  std::string name_;
  std::vector<std::string> basis_names_;
};

using RingPtr = std::shared_ptr<const InvolutiveRing>;

inline RingPtr make_ring(InvolutiveRing r) { return std::make_shared<const InvolutiveRing>(std::move(r)); }

/// Additive map given by a (target rank x source rank) matrix; values are
/// pushed into the target base, so reduction Z -> F_2 is an ordinary map.
struct RingMap {
  RingPtr source, target;
  Mat matrix;

  Vec apply(const Vec& x) const { return embed_vector(matrix.apply(x), target->base()); }

  struct Check {
    bool unital = false;
    bool multiplicative = false;
    bool involutive = false;
    bool ok() const { return unital && multiplicative && involutive; }
  };

  Check check() const {
    Check c;
    c.unital = vectors_equal(apply(source->one()), target->one());
    c.multiplicative = true;
    const std::size_t r = source->rank();
    std::vector<Vec> images(r);
    for (std::size_t i = 0; i < r; ++i) images[i] = apply(source->basis(i));
    for (std::size_t i = 0; i < r && c.multiplicative; ++i)
      for (std::size_t j = 0; j < r && c.multiplicative; ++j) {
        Vec prod = source->zero();
        for (const auto& t : source->basis_product(i, j)) prod[t.index] = t.coeff;
        c.multiplicative = vectors_equal(apply(prod), target->multiply(images[i], images[j]));
      }
    c.involutive = true;
    for (std::size_t i = 0; i < r && c.involutive; ++i)
      c.involutive = vectors_equal(apply(source->involute(source->basis(i))), target->involute(images[i]));
    return c;
  }

  void validate() const {
    require(matrix.rows() == target->rank() && matrix.cols() == source->rank(), ErrorCode::InvalidArgument,
            "ring map matrix has wrong shape");
    auto c = check();
    require(c.unital, ErrorCode::VerificationFailed, "ring map is not unital");
    require(c.multiplicative, ErrorCode::VerificationFailed, "ring map is not multiplicative");
    require(c.involutive, ErrorCode::NotEquivariant, "ring map does not commute with the involutions");
  }
};

inline RingMap identity_map(const RingPtr& r) { return {r, r, Mat::identity(r->rank(), r->base().one())}; }

/// g after f.
inline RingMap compose(const RingMap& g, const RingMap& f) {
  require(f.target->rank() == g.source->rank(), ErrorCode::InvalidArgument, "ring maps are not composable");
  Mat m(g.target->rank(), f.source->rank());
  for (std::size_t j = 0; j < f.source->rank(); ++j) m.set_col(j, g.apply(f.apply(f.source->basis(j))));
  return {f.source, g.target, m};
}

/// Determinant over the fraction field of the base.
inline Scalar determinant(Mat a) {
  require(a.is_square(), ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  Scalar det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) return Scalar(0) * det;
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    Scalar inv = a(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i)
      if (!a(i, c).is_zero()) a.add_row(i, c, -(a(i, c) * inv));
  }
  return det;
}

/// True when the matrix is invertible over the base (determinant a unit).
inline bool is_invertible_over(const Mat& m, const BasePID& base) {
  if (!m.is_square()) return false;
  if (m.rows() == 0) return true;
  return base.is_unit(base.embed(determinant(embed_matrix(m, base))));
}

// ---------------------------------------------------------------- products

struct ProductRing {
  RingPtr ring;
  std::vector<RingMap> projections;
  std::vector<std::size_t> offsets;
};

inline ProductRing product_ring(const std::vector<RingPtr>& factors, std::string name = "") {
  require(!factors.empty(), ErrorCode::InvalidArgument, "empty product");
  const BasePID& base = factors.front()->base();
  std::size_t total = 0;
  std::vector<std::size_t> offsets;
  for (const auto& f : factors) {
    require(f->base() == base, ErrorCode::InvalidArgument, "product factors over different bases");
    offsets.push_back(total);
    total += f->rank();
  }
  std::vector<SparseVec> table(total * total);
  Vec one;
  Mat inv(total, total, base.zero());
  std::vector<std::string> names;
  std::string joined;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& f = *factors[k];
    const std::size_t o = offsets[k], r = f.rank();
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        SparseVec s = f.basis_product(i, j);
        for (auto& t : s) t.index += static_cast<std::uint32_t>(o);
        table[(o + i) * total + (o + j)] = std::move(s);
      }
    one = concat(one, f.one());
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) inv(o + i, o + j) = f.involution()(i, j);
    for (std::size_t i = 0; i < r; ++i) names.push_back(f.basis_names()[i] + "@" + std::to_string(k));
    joined += (joined.empty() ? "" : " x ") + f.name();
  }
  ProductRing out;
  out.ring = make_ring(InvolutiveRing(base, total, std::move(table), one, inv, name.empty() ? joined : name, names));
  out.offsets = offsets;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    Mat p(factors[k]->rank(), total, base.zero());
    for (std::size_t i = 0; i < factors[k]->rank(); ++i) p(i, offsets[k] + i) = base.one();
    out.projections.push_back({out.ring, factors[k], p});
  }
  return out;
}

/// The map into a product assembled from its components.
inline RingMap map_into_product(const RingPtr& source, const ProductRing& product, const std::vector<RingMap>& parts) {
  require(parts.size() == product.projections.size(), ErrorCode::InvalidArgument, "wrong number of components");
  Mat m(product.ring->rank(), source->rank(), product.ring->base().zero());
  for (std::size_t k = 0; k < parts.size(); ++k)
    for (std::size_t i = 0; i < parts[k].matrix.rows(); ++i)
      for (std::size_t j = 0; j < source->rank(); ++j) m(product.offsets[k] + i, j) = parts[k].matrix(i, j);
  return {source, product.ring, m};
}

// ---------------------------------------------------------------- tensor, base change

inline InvolutiveRing tensor_product(const InvolutiveRing& a, const InvolutiveRing& b, std::string name = "") {
  require(a.base() == b.base(), ErrorCode::InvalidArgument, "tensor factors over different bases");
  const std::size_t ra = a.rank(), rb = b.rank(), r = ra * rb;
  std::vector<SparseVec> table(r * r);
  for (std::size_t i1 = 0; i1 < ra; ++i1)
    for (std::size_t j1 = 0; j1 < rb; ++j1)
      for (std::size_t i2 = 0; i2 < ra; ++i2)
        for (std::size_t j2 = 0; j2 < rb; ++j2) {
          SparseVec s;
          for (const auto& t : a.basis_product(i1, i2))
            for (const auto& u : b.basis_product(j1, j2))
              s.push_back({static_cast<std::uint32_t>(t.index * rb + u.index), t.coeff * u.coeff});
          table[(i1 * rb + j1) * r + (i2 * rb + j2)] = std::move(s);
        }
  Vec one(r);
  Mat inv(r, r);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < rb; ++j) {
      one[i * rb + j] = a.one()[i] * b.one()[j];
      for (std::size_t k = 0; k < ra; ++k)
        for (std::size_t l = 0; l < rb; ++l) inv(k * rb + l, i * rb + j) = a.involution()(k, i) * b.involution()(l, j);
      const std::string& na = a.basis_names()[i];
      const std::string& nb = b.basis_names()[j];
      names.push_back(na == "1" ? nb : nb == "1" || nb == "e" ? na : na + "*" + nb);
    }
  return InvolutiveRing(a.base(), r, std::move(table), one, inv, name.empty() ? a.name() + " (x) " + b.name() : name,
                        names);
}

/// Same structure constants read in a larger base (e.g. Z -> Z[1/N]) or reduced into F_{2^k}.
inline InvolutiveRing change_base(const InvolutiveRing& a, const BasePID& base, std::string name = "") {
  const std::size_t r = a.rank();
  std::vector<SparseVec> table(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) table[i * r + j] = a.basis_product(i, j);
  return InvolutiveRing(base, r, std::move(table), a.one(), a.involution(), name.empty() ? a.name() : name,
                        a.basis_names());
}

/// The map a -> a (x) 1 into the base-changed ring.
inline RingMap base_change_map(const RingPtr& a, const RingPtr& changed) {
  return {a, changed, Mat::identity(a->rank(), changed->base().one())};
}

// ---------------------------------------------------------------- quotients

struct QuotientRing {
  RingPtr ring;
  RingMap projection;
  Mat lift;             // source rank x quotient rank: chosen preimages of the new basis
  Lattice ideal;
};

namespace detail {

/// Two-sided ideal generated by the given elements, as a lattice.
inline Lattice two_sided_ideal(const InvolutiveRing& r, const std::vector<Vec>& generators) {
  std::vector<Vec> gens;
  bool all_central = true;
  for (const auto& g : generators)
    if (!r.is_central(g)) all_central = false;
  if (all_central) {
    for (const auto& g : generators)
      for (std::size_t j = 0; j < r.rank(); ++j) gens.push_back(r.multiply(g, r.basis(j)));
    return Lattice::span(r.base(), r.rank(), gens);
  }
  Lattice cur = Lattice::span(r.base(), r.rank(), generators);
  for (;;) {
    std::vector<Vec> next;
    for (std::size_t i = 0; i < cur.rank(); ++i) {
      Vec x = cur.basis_vector(i);
      next.push_back(x);
      for (std::size_t j = 0; j < r.rank(); ++j) {
        next.push_back(r.multiply(x, r.basis(j)));
        next.push_back(r.multiply(r.basis(j), x));
      }
    }
    Lattice grown = Lattice::span(r.base(), r.rank(), next);
    if (grown.rank() == cur.rank() && cur.contains(grown)) return cur;
    cur = grown;
  }
}

}  // namespace detail

/// R / I for a two-sided, involution-stable ideal I with free quotient. The new
/// basis is a subset of the old one whenever the ideal admits unit pivots.
inline QuotientRing quotient_ring(const RingPtr& r, const std::vector<Vec>& generators, std::string name = "") {
  const BasePID& base = r->base();
  const std::size_t n = r->rank();
  Lattice ideal = detail::two_sided_ideal(*r, generators);
  for (std::size_t i = 0; i < ideal.rank(); ++i)
    require(ideal.contains(r->involute(ideal.basis_vector(i))), ErrorCode::InvalidArgument,
            "ideal is not stable under the involution");
  const std::size_t k = ideal.rank();
  Mat rows = ideal.basis();
  std::vector<std::size_t> pivot_of_row;
  std::vector<bool> is_pivot(n, false);
  bool unit_pivots = true;
  for (std::size_t t = 0; t < k && unit_pivots; ++t) {
    std::size_t c = n;
    for (std::size_t j = n; j-- > 0;)
      if (!is_pivot[j] && base.is_unit(rows(t, j))) {
        c = j;
        break;
      }
    if (c == n) {
      unit_pivots = false;
      break;
    }
    rows.scale_row(t, rows(t, c).inverse());
    for (std::size_t u = 0; u < k; ++u)
      if (u != t && !rows(u, c).is_zero()) rows.add_row(u, t, -rows(u, c));
    is_pivot[c] = true;
    pivot_of_row.push_back(c);
  }
  Mat proj, lift;
  std::vector<std::string> names;
  if (unit_pivots) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < n; ++j)
      if (!is_pivot[j]) keep.push_back(j);
    const std::size_t q = keep.size();
    proj = Mat(q, n, base.zero());
    lift = Mat(n, q, base.zero());
    for (std::size_t a = 0; a < q; ++a) {
      proj(a, keep[a]) = base.one();
      lift(keep[a], a) = base.one();
      for (std::size_t t = 0; t < k; ++t) proj(a, pivot_of_row[t]) = base.embed(-rows(t, keep[a]));
      names.push_back(r->basis_names()[keep[a]]);
    }
  } else {
    SmithForm s = smith_normal_form(ideal.basis(), base);
    for (std::size_t i = 0; i < s.rank; ++i)
      require(base.is_unit(s.D(i, i)), ErrorCode::Unsupported, "quotient ring has torsion over the base");
    const std::size_t q = n - s.rank;
    // x = c V_inv with c = x V; the last q coordinates describe the class
    proj = Mat(q, n, base.zero());
    lift = Mat(n, q, base.zero());
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t j = 0; j < n; ++j) {
        proj(a, j) = base.embed(s.V(j, s.rank + a));
        lift(j, a) = base.embed(s.V_inv(s.rank + a, j));
      }
      names.push_back("q" + std::to_string(a));
    }
  }
  const std::size_t q = proj.rows();
  auto project = [&](const Vec& x) { return embed_vector(proj.apply(x), base); };
  std::vector<SparseVec> table(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) table[a * q + b] = to_sparse(project(r->multiply(lift.col(a), lift.col(b))));
  Mat inv(q, q, base.zero());
  for (std::size_t b = 0; b < q; ++b) inv.set_col(b, project(r->involute(lift.col(b))));
  RingPtr out = make_ring(InvolutiveRing(base, q, std::move(table), project(r->one()), inv,
                                         name.empty() ? r->name() + "/I" : name, names));
  return {out, {r, out, proj}, lift, ideal};
}

}  // namespace unil
