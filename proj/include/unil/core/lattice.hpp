#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "unil/core/abelian.hpp"
#include "unil/core/base.hpp"
#include "unil/core/matrix.hpp"
#include "unil/core/smith.hpp"

namespace unil {

/// A submodule of base^n, stored as a basis (linearly independent rows).
class Lattice {
 public:
  Lattice() = default;

  /// Span of the given generator rows.
  static Lattice span(const BasePID& base, std::size_t dim, const Mat& generators) {
    Lattice l(base, dim);
    if (generators.rows() == 0) {
      l.basis_ = Mat(0, dim);
      l.prepare();
      return l;
    }
    require(generators.cols() == dim, ErrorCode::InvalidArgument, "generator length mismatch");
    SmithForm s = smith_normal_form(generators, base);
    // rows of U*G = D*V_inv, so the nonzero ones are d_i times rows of V_inv
    l.basis_ = Mat(s.rank, dim);
    for (std::size_t i = 0; i < s.rank; ++i)
      for (std::size_t j = 0; j < dim; ++j) l.basis_(i, j) = base.embed(s.D(i, i) * s.V_inv(i, j));
    l.prepare();
    return l;
  }

  static Lattice span(const BasePID& base, std::size_t dim, const std::vector<Vec>& generators) {
    return span(base, dim, Mat::from_rows(generators, dim));
  }

  static Lattice full(const BasePID& base, std::size_t dim) {
    return span(base, dim, Mat::identity(dim, base.one()));
  }

  /// Kernel of x -> A x, where A is a (target x source) matrix over the base.
  static Lattice kernel(const BasePID& base, const Mat& a) {
    const std::size_t n = a.cols();
    Lattice l(base, n);
    if (a.rows() == 0) return full(base, n);
    SmithForm s = smith_normal_form(a, base);
    l.basis_ = Mat(n - s.rank, n);
    for (std::size_t k = s.rank; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) l.basis_(k - s.rank, i) = base.embed(s.V(i, k));
    l.prepare();
    return l;
  }

  /// Image of x -> A x (span of the columns).
  static Lattice image(const BasePID& base, const Mat& a) { return span(base, a.rows(), a.transpose()); }

  const BasePID& base() const { return base_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.rows(); }
  const Mat& basis() const { return basis_; }
  Vec basis_vector(std::size_t i) const { return basis_.row(i); }

  /// Coordinates with respect to the basis, if v lies in the lattice.
  std::optional<Vec> coordinates(const Vec& v) const {
    require(v.size() == dim_, ErrorCode::InvalidArgument, "vector length mismatch");
    const std::size_t k = rank();
    Vec c(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const Scalar& x = v[pivots_[j]];
        if (!x.is_zero() && !pivot_inverse_(j, i).is_zero()) c[i] += x * pivot_inverse_(j, i);
      }
    Vec back(dim_);
    for (std::size_t i = 0; i < k; ++i) {
      if (c[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j)
        if (!basis_(i, j).is_zero()) back[j] += c[i] * basis_(i, j);
    }
    if (!vectors_equal(back, v)) return std::nullopt;
    for (auto& x : c) {
      if (!base_.contains(x)) return std::nullopt;
      x = base_.embed(x);
    }
    return c;
  }

  bool contains(const Vec& v) const { return coordinates(v).has_value(); }

  bool contains(const Lattice& other) const {
    for (std::size_t i = 0; i < other.rank(); ++i)
      if (!contains(other.basis_vector(i))) return false;
    return true;
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.dim_ == b.dim_ && a.rank() == b.rank() && a.contains(b) && b.contains(a);
  }

  Vec combine(const Vec& coords) const {
    Vec out(dim_);
    for (std::size_t i = 0; i < rank(); ++i)
      if (!coords[i].is_zero())
        for (std::size_t j = 0; j < dim_; ++j) out[j] += coords[i] * basis_(i, j);
    return out;
  }

 private:
  Lattice(const BasePID& base, std::size_t dim) : base_(base), dim_(dim) {}

  // Pick k independent columns of the basis and invert that k x k block over
  // the fraction field, so coordinates are a single product.
  void prepare() {
    const std::size_t k = basis_.rows();
    Mat work = basis_;
    pivots_.clear();
    std::size_t r = 0;
    for (std::size_t j = 0; j < dim_ && r < k; ++j) {
      std::size_t p = r;
      while (p < k && work(p, j).is_zero()) ++p;
      if (p == k) continue;
      work.swap_rows(r, p);
      Scalar inv = work(r, j).inverse();
      for (std::size_t i = r + 1; i < k; ++i)
        if (!work(i, j).is_zero()) work.add_row(i, r, -(work(i, j) * inv));
      pivots_.push_back(j);
      ++r;
    }
    require(r == k, ErrorCode::VerificationFailed, "lattice basis is not independent");
    Mat block(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) block(i, j) = basis_(i, pivots_[j]);
    pivot_inverse_ = invert_over_fraction_field(block);
  }

  static Mat invert_over_fraction_field(Mat a) {
    const std::size_t n = a.rows();
    Mat inv = Mat::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t p = c;
      while (p < n && a(p, c).is_zero()) ++p;
      require(p < n, ErrorCode::VerificationFailed, "singular pivot block");
      a.swap_rows(c, p);
      inv.swap_rows(c, p);
      Scalar f = a(c, c).inverse();
      a.scale_row(c, f);
      inv.scale_row(c, f);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == c || a(i, c).is_zero()) continue;
        Scalar g = -a(i, c);
        a.add_row(i, c, g);
        inv.add_row(i, c, g);
      }
    }
    return inv;
  }

  BasePID base_;
  std::size_t dim_ = 0;
  Mat basis_;
  std::vector<std::size_t> pivots_;
  Mat pivot_inverse_;  // maps pivot-column values to coordinates
};

/// The quotient L/M of nested lattices, with explicit generators and a
/// coordinate function. Each component is a cyclic summand of the underlying
/// abelian group: modulus 0 means infinite cyclic (a free base copy), d > 1 means
/// Z/d. Over F_{2^k} every free copy contributes k components of modulus 2.
class LatticeQuotient {
 public:
  LatticeQuotient(const Lattice& top, const Lattice& bottom) : top_(top), bottom_(bottom) {
    require(top.dim() == bottom.dim() && top.base() == bottom.base(), ErrorCode::InvalidArgument,
            "quotient of lattices in different modules");
    const BasePID& base = top.base();
    const std::size_t k = top.rank();
    Mat c(bottom.rank(), k);
    for (std::size_t i = 0; i < bottom.rank(); ++i) {
      auto coords = top.coordinates(bottom.basis_vector(i));
      require(coords.has_value(), ErrorCode::InvalidArgument, "sublattice is not contained in the lattice");
      c.set_row(i, *coords);
    }
    if (bottom.rank() == 0) {
      V_ = Mat::identity(k, base.one());
      Mat v_inv = V_;
      diag_.assign(k, Scalar(0));
      build(v_inv);
      return;
    }
    SmithForm s = smith_normal_form(c, base);
    V_ = s.V;
    diag_.assign(k, Scalar(0));
    for (std::size_t i = 0; i < s.rank; ++i) diag_[i] = s.D(i, i);
    build(s.V_inv);
  }

  struct Component {
    Integer modulus;  // 0 = free
    Vec representative;
  };

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  FgAbelianGroup group() const {
    std::size_t free = 0;
    std::vector<Integer> torsion;
    for (const auto& c : components_) {
      if (c.modulus == 0)
        ++free;
      else
        torsion.push_back(c.modulus);
    }
    return FgAbelianGroup::from_cyclic_factors(free, torsion);
  }

  /// Coordinates of the class of v (v must lie in the top lattice).
  std::vector<Integer> coordinates(const Vec& v) const {
    auto c = top_.coordinates(v);
    require(c.has_value(), ErrorCode::InvalidArgument, "vector does not lie in the lattice");
    const BasePID& base = top_.base();
    const std::size_t k = top_.rank();
    Vec cv(k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i)
        if (!(*c)[i].is_zero() && !V_(i, j).is_zero()) cv[j] += (*c)[i] * V_(i, j);
    std::vector<Integer> out;
    out.reserve(components_.size());
    for (std::size_t idx = 0; idx < component_source_.size(); ++idx) {
      auto [j, bit] = component_source_[idx];
      const Scalar x = base.embed(cv[j]);
      const Integer& mod = components_[idx].modulus;
      if (base.is_field()) {
        out.push_back(Integer((x.bits() >> bit) & 1));
      } else if (mod == 0) {
        require(x.rational().is_integer(), ErrorCode::Unsupported, "free coordinate over a localized base is not integral");
        out.push_back(x.rational().num());
      } else {
        // a/b with b a unit mod d
        const Rational& q = x.rational();
        auto eg = extended_gcd(mod_floor(q.den(), mod), mod);
        out.push_back(mod_floor(q.num() * eg.x, mod));
      }
    }
    return out;
  }

  bool is_zero_class(const Vec& v) const {
    for (const auto& x : coordinates(v))
      if (x != 0) return false;
    return true;
  }

  const Lattice& top() const { return top_; }
  const Lattice& bottom() const { return bottom_; }

 private:
  void build(const Mat& v_inv) {
    const BasePID& base = top_.base();
    const std::size_t k = top_.rank();
    for (std::size_t j = 0; j < k; ++j) {
      Vec gen_coords = v_inv.row(j);
      Vec gen = top_.combine(gen_coords);
      const Scalar& d = diag_[j];
      if (base.is_field()) {
        if (!d.is_zero()) continue;
        for (unsigned b = 0; b < base.field_degree(); ++b) {
          Scalar alpha = Scalar::field_element(std::uint64_t{1} << b, base.modulus());
          components_.push_back({Integer(2), embed_vector(scale(alpha, gen), base)});
          component_source_.push_back({j, b});
        }
        continue;
      }
      Integer dv = d.rational().num();
      if (dv == 1) continue;
      components_.push_back({dv, gen});
      component_source_.push_back({j, 0});
    }
  }

  Lattice top_, bottom_;
  Mat V_;
  std::vector<Scalar> diag_;
  std::vector<Component> components_;
  std::vector<std::pair<std::size_t, unsigned>> component_source_;
};

}  // namespace unil
