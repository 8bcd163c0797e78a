#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "unil/core/errors.hpp"
#include "unil/core/integer.hpp"

namespace unil {

namespace gf2 {

inline int degree(std::uint64_t p) {
  int d = -1;
  while (p) {
    p >>= 1;
    ++d;
  }
  return d;
}

inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

inline std::uint64_t reduce(std::uint64_t a, std::uint64_t modulus) {
  int dm = degree(modulus);
  for (int d = degree(a); d >= dm; d = degree(a)) a ^= modulus << (d - dm);
  return a;
}

inline bool is_irreducible(std::uint64_t p) {
  int d = degree(p);
  if (d <= 0) return false;
  for (std::uint64_t q = 2; degree(q) <= d / 2; ++q)
    if (reduce(p, q) == 0) return false;
  return true;
}

/// Smallest irreducible polynomial of degree k over F2 (bit i is the coefficient of x^i).
inline std::uint64_t field_modulus(unsigned k) {
  for (std::uint64_t p = std::uint64_t{1} << k;; ++p)
    if (is_irreducible(p)) return p;
}

}  // namespace gf2

/// Element of Q (characteristic zero bases) or of a finite field F_{2^k}.
/// Rational values mix freely with field elements and are reduced on contact.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Integer& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& v) : q_(v) {}  // NOLINT(google-explicit-constructor)

  static Scalar field_element(std::uint64_t bits, std::uint64_t modulus) {
    Scalar s;
    s.mod_ = modulus;
    s.bits_ = gf2::reduce(bits, modulus);
    return s;
  }

  bool is_field_element() const { return mod_ != 0; }
  const Rational& rational() const {
    require(!is_field_element(), ErrorCode::InvalidArgument, "field element used as a rational");
    return q_;
  }
  std::uint64_t bits() const { return bits_; }
  std::uint64_t modulus() const { return mod_; }

  bool is_zero() const { return mod_ ? bits_ == 0 : q_.is_zero(); }
  bool is_one() const { return mod_ ? bits_ == 1 : q_ == Rational(1); }
  bool is_integer() const { return mod_ != 0 || q_.is_integer(); }

  /// Image of a rational number in F_{2^k}; the denominator must be odd.
  Scalar in_field(std::uint64_t modulus) const {
    if (mod_) return *this;
    require(q_.den() % 2 != 0, ErrorCode::NotInvertible, "denominator " + q_.den().str() + " is not invertible in characteristic 2");
    return field_element(q_.num() % 2 != 0 ? 1 : 0, modulus);
  }

  Scalar operator-() const {
    if (mod_) return *this;
    return Scalar(-q_);
  }
  Scalar& operator+=(const Scalar& o) {
    if (!mod_ && !o.mod_) {
      q_ += o.q_;
    } else {
      std::uint64_t m = mod_ ? mod_ : o.mod_;
      *this = field_element(in_field(m).bits_ ^ o.in_field(m).bits_, m);
    }
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    if (!mod_ && !o.mod_) {
      q_ -= o.q_;
      return *this;
    }
    return *this += o;
  }
  Scalar& operator*=(const Scalar& o) {
    if (!mod_ && !o.mod_) {
      q_ *= o.q_;
    } else {
      std::uint64_t m = mod_ ? mod_ : o.mod_;
      *this = field_element(gf2::clmul(in_field(m).bits_, o.in_field(m).bits_), m);
    }
    return *this;
  }
  Scalar inverse() const {
    require(!is_zero(), ErrorCode::NotInvertible, "zero is not invertible");
    if (!mod_) return Scalar(Rational(1) / q_);
    // a^(q-2) in F_q
    int k = gf2::degree(mod_);
    Scalar result = field_element(1, mod_), base = *this;
    std::uint64_t e = (std::uint64_t{1} << k) - 2;
    while (e) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (!a.mod_ && !b.mod_) return a.q_ == b.q_;
    std::uint64_t m = a.mod_ ? a.mod_ : b.mod_;
    return a.in_field(m).bits_ == b.in_field(m).bits_;
  }

  std::string str() const {
    if (!mod_) return q_.str();
    if (gf2::degree(mod_) == 1) return bits_ ? "1" : "0";
    return "g" + std::to_string(bits_);
  }

 private:
  Rational q_;
  std::uint64_t bits_ = 0;
  std::uint64_t mod_ = 0;
};

/// Coefficient domain: Z, Z[1/N] or F_{2^k}.
class BasePID {
 public:
  enum class Kind { Integers, Localized, FiniteField };

  BasePID() = default;

  static BasePID integers() { return BasePID(); }

  static BasePID localized(std::uint64_t n) {
    require(n >= 2, ErrorCode::InvalidArgument, "Z[1/N] needs N >= 2");
    BasePID b;
    b.kind_ = Kind::Localized;
    b.primes_ = prime_factors(n);
    return b;
  }

  static BasePID finite_field(unsigned k) {
    require(k >= 1 && k <= 16, ErrorCode::InvalidArgument, "F_{2^k} supported for 1 <= k <= 16");
    BasePID b;
    b.kind_ = Kind::FiniteField;
    b.degree_ = k;
    b.modulus_ = gf2::field_modulus(k);
    return b;
  }

  static BasePID f2() { return finite_field(1); }

  Kind kind() const { return kind_; }
  bool is_field() const { return kind_ == Kind::FiniteField; }
  bool characteristic_zero() const { return kind_ != Kind::FiniteField; }
  const std::vector<std::uint64_t>& inverted_primes() const { return primes_; }
  unsigned field_degree() const { return degree_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t field_order() const { return std::uint64_t{1} << degree_; }

  /// Product of the inverted primes (1 for Z, 0 for fields).
  std::uint64_t radical() const {
    if (is_field()) return 0;
    std::uint64_t r = 1;
    for (auto p : primes_) r *= p;
    return r;
  }

  bool is_invertible_prime(std::uint64_t p) const {
    return std::find(primes_.begin(), primes_.end(), p) != primes_.end();
  }

  bool two_invertible() const { return kind_ == Kind::Localized && is_invertible_prime(2); }

  bool is_unit_integer(const Integer& d) const {
    if (is_field()) return d % 2 != 0;
    return abs_value(strip_primes(d, primes_)) == 1;
  }

  bool contains(const Scalar& s) const {
    if (s.is_field_element()) return is_field() && s.modulus() == modulus_;
    if (is_field()) return s.rational().den() % 2 != 0;
    return is_unit_integer(s.rational().den());
  }

  bool is_unit(const Scalar& s) const {
    if (s.is_zero()) return false;
    if (is_field()) return true;
    return contains(s) && is_unit_integer(s.rational().num());
  }

  /// Canonical representative of s in this base (field elements for F_{2^k}).
  Scalar embed(const Scalar& s) const {
    require(contains(s), ErrorCode::InvalidArgument, "value " + s.str() + " does not lie in " + name());
    return is_field() ? s.in_field(modulus_) : s;
  }

  Scalar zero() const { return is_field() ? Scalar::field_element(0, modulus_) : Scalar(0); }
  Scalar one() const { return is_field() ? Scalar::field_element(1, modulus_) : Scalar(1); }

  std::string name() const {
    switch (kind_) {
      case Kind::Integers: return "Z";
      case Kind::Localized: return "Z[1/" + std::to_string(radical()) + "]";
      case Kind::FiniteField: return "F" + std::to_string(field_order());
    }
    return "?";
  }

  static BasePID parse(const std::string& text) {
    if (text == "Z") return integers();
    if (text.rfind("Z[1/", 0) == 0 && text.size() > 5 && text.back() == ']') {
      std::string digits = text.substr(4, text.size() - 5);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 10) {
        return localized(std::stoull(digits));
      }
    }
    if (text.size() >= 2 && text[0] == 'F') {
      std::string digits = text.substr(1);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 7) {
        std::uint64_t q = std::stoull(digits);
        unsigned k = 0;
        while ((std::uint64_t{1} << k) < q) ++k;
        if (k >= 1 && (std::uint64_t{1} << k) == q) return finite_field(k);
      }
    }
    fail(ErrorCode::ParseError, "unknown base ring '" + text + "'");
  }

  friend bool operator==(const BasePID& a, const BasePID& b) {
    return a.kind_ == b.kind_ && a.primes_ == b.primes_ && a.degree_ == b.degree_;
  }
  friend bool operator!=(const BasePID& a, const BasePID& b) { return !(a == b); }

 private:
  Kind kind_ = Kind::Integers;
  std::vector<std::uint64_t> primes_;
  unsigned degree_ = 0;
  std::uint64_t modulus_ = 0;
};

}  // namespace unil
