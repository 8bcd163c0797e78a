#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "unil/core/errors.hpp"

namespace unil {

using Integer = boost::multiprecision::cpp_int;

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_value(a / gcd(a, b) * b);
}

struct ExtendedGcd {
  Integer g;  // non-negative
  Integer x;
  Integer y;  // g == a*x + b*y
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {Integer(-old_r), Integer(-old_s), Integer(-old_t)};
  return {old_r, old_s, old_t};
}

/// Floor-style residue in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs_value(m);
  return r;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

/// Removes every factor of the listed primes from d.
inline Integer strip_primes(Integer d, const std::vector<std::uint64_t>& primes) {
  for (auto p : primes) {
    if (d == 0) break;
    while (d % p == 0) d /= p;
  }
  return d;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (auto p : prime_factors(n)) result = result / p * (p - 1);
  return result;
}

inline std::int64_t to_int64(const Integer& a) {
  require(a >= std::numeric_limits<std::int64_t>::min() && a <= std::numeric_limits<std::int64_t>::max(),
          ErrorCode::InvalidArgument, "integer does not fit in 64 bits");
  return static_cast<std::int64_t>(a);
}

/// Exact rational number in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Integer n) : num_(std::move(n)), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Integer n, Integer d) : num_(std::move(n)), den_(std::move(d)) {
    require(den_ != 0, ErrorCode::InvalidArgument, "zero denominator");
    normalize();
  }

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  Rational& operator+=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
      num_ += o.num_;
    } else {
      num_ = num_ * o.den_ + o.num_ * den_;
      den_ *= o.den_;
      normalize();
    }
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    if (den_ == 1 && o.den_ == 1) {
      num_ -= o.num_;
    } else {
      num_ = num_ * o.den_ - o.num_ * den_;
      den_ *= o.den_;
      normalize();
    }
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    num_ *= o.num_;
    if (den_ != 1 || o.den_ != 1) {
      den_ *= o.den_;
      normalize();
    }
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    require(o.num_ != 0, ErrorCode::InvalidArgument, "division by zero");
    Integer n = num_ * o.den_;
    Integer d = den_ * o.num_;
    num_ = std::move(n);
    den_ = std::move(d);
    normalize();
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.num_ * b.den_ < b.num_ * a.den_; }

  std::string str() const { return den_ == 1 ? num_.str() : num_.str() + "/" + den_.str(); }

  static Rational parse(const std::string& text) {
    auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return Rational(Integer(text));
      return Rational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
    } catch (const std::runtime_error&) {
      fail(ErrorCode::ParseError, "not a rational number: '" + text + "'");
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    if (den_ == 1) return;
    Integer g = gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  Integer num_;
  Integer den_;
};

}  // namespace unil
