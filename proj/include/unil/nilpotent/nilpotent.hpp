#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unil/core/errors.hpp"
#include "unil/core/integer.hpp"
#include "unil/core/matrix.hpp"

namespace unil {

/// Element of Q or of F_p for an odd prime p. Plain rationals are reduced when
/// they meet an F_p element, the same way Scalar mixes with F_{2^k}.
class Coeff {
 public:
  Coeff() = default;
  Coeff(long long v) : q_(v) {}
  Coeff(const Rational& q) : q_(q) {}

  static Coeff modular(const Integer& v, std::uint64_t p) {
    Coeff c;
    c.p_ = p;
    c.q_ = Rational(mod_floor(v, Integer(p)));
    return c;
  }

  std::uint64_t prime() const { return p_; }
  const Rational& value() const { return q_; }
  bool is_zero() const { return q_.is_zero(); }

  Coeff reduced(std::uint64_t p) const {
    if (p == 0 || p_ == p) return *this;
    require(p_ == 0, ErrorCode::InvalidArgument, "mixing coefficients of different characteristic");
    const Integer pp(p);
    require(mod_floor(q_.den(), pp) != 0, ErrorCode::NotInvertible, "denominator vanishes mod " + std::to_string(p));
    auto eg = extended_gcd(mod_floor(q_.den(), pp), pp);
    return modular(q_.num() * eg.x, p);
  }

  Coeff& operator+=(const Coeff& o) { return combine(o, [](Rational& a, const Rational& b) { a += b; }); }
  Coeff& operator-=(const Coeff& o) { return combine(o, [](Rational& a, const Rational& b) { a -= b; }); }
  Coeff& operator*=(const Coeff& o) { return combine(o, [](Rational& a, const Rational& b) { a *= b; }); }
  Coeff operator-() const { return Coeff() - *this; }
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  friend bool operator==(const Coeff& a, const Coeff& b) {
    const std::uint64_t p = a.p_ ? a.p_ : b.p_;
    return a.reduced(p).q_ == b.reduced(p).q_;
  }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

  Coeff inverse() const {
    require(!is_zero(), ErrorCode::NotInvertible, "inverse of zero");
    if (p_ == 0) return Coeff(Rational(1) / q_);
    const Integer pp(p_);
    auto eg = extended_gcd(q_.num(), pp);
    return modular(eg.x, p_);
  }

  std::string str() const { return q_.str(); }

 private:
  template <class F>
  Coeff& combine(const Coeff& o, F f) {
    const std::uint64_t p = p_ ? p_ : o.p_;
    Coeff a = reduced(p), b = o.reduced(p);
    f(a.q_, b.q_);
    if (p) a = modular(a.q_.num(), p);
    return *this = a;
  }

  Rational q_;
  std::uint64_t p_ = 0;
};

using CMat = Matrix<Coeff>;

/// Coefficient rings for the nilpotent constructions: Z, Z[1/2], F_p.
struct CoefficientRing {
  enum class Kind { Integers, Dyadic, PrimeField };
  Kind kind = Kind::Dyadic;
  std::uint64_t p = 0;

  static CoefficientRing integers() { return {Kind::Integers, 0}; }
  static CoefficientRing dyadic() { return {Kind::Dyadic, 0}; }
  static CoefficientRing prime_field(std::uint64_t p) {
    require(p >= 2 && prime_factors(p) == std::vector<std::uint64_t>{p},
            ErrorCode::InvalidArgument, "F_p needs p prime");
    return {Kind::PrimeField, p};
  }
  static CoefficientRing parse(const std::string& text) {
    if (text == "Z") return integers();
    if (text == "Z[1/2]") return dyadic();
    if (text.size() > 1 && text[0] == 'F') {
      try {
        return prime_field(std::stoull(text.substr(1)));
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
      }
    }
    fail(ErrorCode::ParseError, "unknown coefficient ring '" + text + "' (expected Z, Z[1/2] or Fp)");
  }

  std::string name() const {
    switch (kind) {
      case Kind::Integers: return "Z";
      case Kind::Dyadic: return "Z[1/2]";
      case Kind::PrimeField: return "F" + std::to_string(p);
    }
    return "?";
  }

  bool two_invertible() const { return kind == Kind::Dyadic || (kind == Kind::PrimeField && p != 2); }

  bool contains(const Coeff& c) const {
    if (kind == Kind::PrimeField) return c.prime() == 0 ? mod_floor(c.value().den(), Integer(p)) != 0 : c.prime() == p;
    if (c.prime() != 0) return false;
    if (kind == Kind::Integers) return c.value().is_integer();
    Integer d = c.value().den();
    while (d % 2 == 0) d /= 2;
    return d == 1;
  }

  Coeff embed(const Coeff& c) const {
    require(contains(c), ErrorCode::InvalidArgument, c.str() + " does not lie in " + name());
    return kind == Kind::PrimeField ? c.reduced(p) : c;
  }
  Coeff zero() const { return embed(Coeff(0)); }
  Coeff one() const { return embed(Coeff(1)); }

  bool is_unit(const Coeff& c) const {
    if (!contains(c) || c.is_zero()) return false;
    if (kind == Kind::PrimeField) return true;
    const Integer n = abs_value(c.value().num());
    if (kind == Kind::Integers) return n == 1;
    Integer m = n;
    while (m % 2 == 0) m /= 2;
    return m == 1;
  }

  CMat embed(const CMat& m) const {
    CMat out(m.rows(), m.cols(), zero());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = embed(m(i, j));
    return out;
  }
};

/// (-1/2 choose r) = (2r choose r)(-1/4)^r.
inline Rational half_binomial(unsigned r) {
  Integer central(1);
  for (unsigned i = 1; i <= r; ++i) central = central * Integer(r + i) / Integer(i);
  Integer four(1);
  for (unsigned i = 0; i < r; ++i) four *= 4;
  return Rational(r % 2 ? -central : central, four);
}

inline CMat cmat_identity(std::size_t n, const CoefficientRing& r) { return CMat::identity(n, r.one()); }

/// Smallest k with m^k = 0, or 0 if m is not nilpotent (m^n != 0 for n = size).
inline std::size_t nilpotency_index(const CMat& m) {
  require(m.is_square(), ErrorCode::InvalidArgument, "nilpotency needs a square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 0;
  // repeated squaring: m^(2^k) for 2^k >= n
  CMat sq = m;
  for (std::size_t e = 1; e < n; e *= 2) sq = sq * sq;
  if (!sq.is_zero()) return 0;
  CMat p = m;
  std::size_t k = 1;
  while (!p.is_zero()) {
    p = p * m;
    ++k;
  }
  return k;
}

struct NilpotentWitness {
  CoefficientRing ring;
  CMat rho;
  std::size_t index = 0;

  static NilpotentWitness make(const CoefficientRing& r, const CMat& rho) {
    NilpotentWitness w{r, r.embed(rho), 0};
    w.index = nilpotency_index(w.rho);
    require(w.index > 0 || rho.rows() == 0, ErrorCode::NotNilpotent, "matrix is not nilpotent");
    return w;
  }
};

struct SquareRootResult {
  CMat v;
  std::size_t terms = 0;
  bool squares_to_inverse = false;  // V V (1 + rho) = 1
  bool commutes = false;            // V rho = rho V
  bool ok() const { return squares_to_inverse && commutes; }
};

/// V = sum_r (-1/2 choose r) rho^r, truncated at the nilpotency index.
inline SquareRootResult nilpotent_sqrt(const NilpotentWitness& w) {
  require(w.ring.two_invertible(), ErrorCode::TwoNotInvertible, "2 is not invertible in " + w.ring.name());
  const std::size_t n = w.rho.rows();
  require(nilpotency_index(w.rho) == w.index && (w.index > 0 || n == 0), ErrorCode::NotNilpotent, "matrix is not nilpotent");
  const CMat id = cmat_identity(n, w.ring);
  SquareRootResult out;
  out.v = CMat(n, n, w.ring.zero());
  CMat power = id;
  for (std::size_t r = 0; r < w.index; ++r) {
    out.v = out.v + w.ring.embed(Coeff(half_binomial(unsigned(r)))) * power;
    power = power * w.rho;
    ++out.terms;
  }
  if (n == 0) out.v = id;
  out.squares_to_inverse = out.v * out.v * (id + w.rho) == id;
  out.commutes = out.v * w.rho == w.rho * out.v;
  return out;
}

inline SquareRootResult nilpotent_sqrt(const CoefficientRing& r, const CMat& rho) {
  require(r.two_invertible(), ErrorCode::TwoNotInvertible, "2 is not invertible in " + r.name());
  return nilpotent_sqrt(NilpotentWitness::make(r, rho));
}

// ---------------------------------------------------------------- R[x]

/// Matrix with entries in R[x], stored densely by degree.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(std::size_t n, const CoefficientRing& r) : n_(n), ring_(r) {}
  static PolyMatrix constant(const CMat& m, const CoefficientRing& r) {
    PolyMatrix p(m.rows(), r);
    p.coeffs_.push_back(r.embed(m));
    p.trim();
    return p;
  }
  /// x * m
  static PolyMatrix linear(const CMat& m, const CoefficientRing& r) {
    PolyMatrix p(m.rows(), r);
    p.coeffs_.push_back(CMat(m.rows(), m.rows(), r.zero()));
    p.coeffs_.push_back(r.embed(m));
    p.trim();
    return p;
  }

  std::size_t size() const { return n_; }
  int degree() const { return int(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  CMat coefficient(std::size_t d) const { return d < coeffs_.size() ? coeffs_[d] : CMat(n_, n_, ring_.zero()); }

  CMat evaluate(const Coeff& x) const {
    CMat out(n_, n_, ring_.zero());
    Coeff power = ring_.one();
    for (const auto& c : coeffs_) {
      out = out + power * c;
      power *= x;
    }
    return out;
  }

  PolyMatrix transpose() const {
    PolyMatrix out(n_, ring_);
    for (const auto& c : coeffs_) out.coeffs_.push_back(c.transpose());
    return out;
  }

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
    PolyMatrix out(a.n_, a.ring_);
    const std::size_t len = std::max(a.coeffs_.size(), b.coeffs_.size());
    for (std::size_t d = 0; d < len; ++d) out.coeffs_.push_back(a.coefficient(d) + b.coefficient(d));
    out.trim();
    return out;
  }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    require(a.n_ == b.n_, ErrorCode::InvalidArgument, "polynomial matrix size mismatch");
    PolyMatrix out(a.n_, a.ring_);
    if (a.is_zero() || b.is_zero()) return out;
    out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, CMat(a.n_, a.n_, a.ring_.zero()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out.coeffs_[i + j] = out.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
    out.trim();
    return out;
  }
  friend PolyMatrix operator*(const Coeff& s, PolyMatrix a) {
    for (auto& c : a.coeffs_) c = s * c;
    a.trim();
    return a;
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.n_ != b.n_ || a.coeffs_.size() != b.coeffs_.size()) return false;
    for (std::size_t d = 0; d < a.coeffs_.size(); ++d)
      if (a.coeffs_[d] != b.coeffs_[d]) return false;
    return true;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::size_t n_ = 0;
  CoefficientRing ring_;
  std::vector<CMat> coeffs_;
};

// ---------------------------------------------------------------- lagrangian transport

/// Inverse over the coefficient ring by Gauss-Jordan; fails unless det is a unit.
inline CMat invert_matrix(const CMat& m, const CoefficientRing& r) {
  require(m.is_square(), ErrorCode::InvalidArgument, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  CMat a = r.embed(m), inv = cmat_identity(n, r);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c).is_zero()) ++piv;
    require(piv < n, ErrorCode::NotInvertible, "matrix is singular");
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    const Coeff f = a(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) *= f;
      inv(c, j) *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const Coeff g = a(i, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= g * a(c, j);
        inv(i, j) -= g * inv(c, j);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      require(r.contains(inv(i, j)), ErrorCode::NotInvertible, "matrix is not invertible over " + r.name());
  return inv;
}

inline bool is_symmetric(const CMat& m) { return m.is_square() && m == m.transpose(); }

struct LagrangianTransportReport {
  CoefficientRing ring;
  CMat nu;                 // lambda0^-1 lambda1
  std::size_t index = 0;   // nilpotency index of nu
  PolyMatrix v;            // sum (-1/2 choose r) (x nu)^r
  bool self_adjoint = false;    // (x nu)^* lambda0 = lambda0 (x nu)
  bool v_adjoint = false;       // V^* lambda0 = lambda0 V
  bool transported = false;     // V^* (lambda0 + x lambda1) V = lambda0
  bool ok() const { return self_adjoint && v_adjoint && transported; }
};

/// The form lambda0 + x lambda1 over R[x] (trivial involution on R, x* = x) is
/// carried back to lambda0 by V = (1 + x nu)^(-1/2).
inline LagrangianTransportReport verify_lagrangian_transport(const CoefficientRing& r, const CMat& lambda0, const CMat& lambda1) {
  require(r.two_invertible(), ErrorCode::TwoNotInvertible, "2 is not invertible in " + r.name());
  require(lambda0.is_square() && lambda1.rows() == lambda0.rows() && lambda1.cols() == lambda0.cols(),
          ErrorCode::InvalidArgument, "lambda0 and lambda1 must be square of the same size");
  const CMat l0 = r.embed(lambda0), l1 = r.embed(lambda1);
  require(is_symmetric(l0), ErrorCode::NotSymmetric, "lambda0 is not symmetric");
  require(is_symmetric(l1), ErrorCode::NotSymmetric, "lambda1 is not symmetric");
  const std::size_t n = l0.rows();
  LagrangianTransportReport rep;
  rep.ring = r;
  rep.nu = invert_matrix(l0, r) * l1;
  rep.index = nilpotency_index(rep.nu);
  require(rep.index > 0 || n == 0, ErrorCode::NotNilpotent, "lambda0^-1 lambda1 is not nilpotent");

  const PolyMatrix xnu = PolyMatrix::linear(rep.nu, r);
  const PolyMatrix p0 = PolyMatrix::constant(l0, r);
  PolyMatrix power = PolyMatrix::constant(cmat_identity(n, r), r);
  rep.v = PolyMatrix(n, r);
  for (std::size_t k = 0; k < std::max<std::size_t>(rep.index, 1); ++k) {
    rep.v = rep.v + r.embed(Coeff(half_binomial(unsigned(k)))) * power;
    power = power * xnu;
  }
  rep.self_adjoint = xnu.transpose() * p0 == p0 * xnu;
  rep.v_adjoint = rep.v.transpose() * p0 == p0 * rep.v;
  const PolyMatrix form = p0 + PolyMatrix::linear(l1, r);
  rep.transported = rep.v.transpose() * form * rep.v == p0;
  return rep;
}

}  // namespace unil
