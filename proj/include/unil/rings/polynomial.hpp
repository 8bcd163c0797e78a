#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/core/integer.hpp"

namespace unil {

// Integer polynomials, coefficient of x^i at index i, no trailing zeros.
using IntPoly = std::vector<Integer>;

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

/// Exact division by a monic polynomial; fails if the remainder is nonzero.
inline IntPoly poly_div_exact(IntPoly a, const IntPoly& monic) {
  require(!monic.empty() && monic.back() == 1, ErrorCode::InvalidArgument, "divisor must be monic");
  const std::size_t db = monic.size() - 1;
  if (a.size() < monic.size()) {
    trim(a);
    require(a.empty(), ErrorCode::VerificationFailed, "polynomial division is not exact");
    return {};
  }
  IntPoly q(a.size() - db);
  for (std::size_t i = a.size(); i-- > db;) {
    Integer c = a[i];
    if (c == 0) continue;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * monic[j];
  }
  trim(a);
  require(a.empty(), ErrorCode::VerificationFailed, "polynomial division is not exact");
  trim(q);
  return q;
}

inline IntPoly cyclotomic_polynomial(std::uint64_t m) {
  require(m >= 1, ErrorCode::InvalidArgument, "cyclotomic index must be positive");
  static std::map<std::uint64_t, IntPoly> cache;
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  IntPoly p(m + 1);
  p[0] = -1;
  p[m] = 1;
  for (std::uint64_t d = 1; d < m; ++d)
    if (m % d == 0) p = poly_div_exact(p, cyclotomic_polynomial(d));
  cache[m] = p;
  return p;
}

inline std::string poly_str(const IntPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] == 0) continue;
    Integer c = p[i];
    bool neg = c < 0;
    if (neg) c = -c;
    if (!out.empty()) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    if (c != 1 || i == 0) out += c.str();
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// Multiplicative order of a modulo m (gcd(a, m) = 1).
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t m) {
  require(m >= 1, ErrorCode::InvalidArgument, "modulus must be positive");
  if (m == 1) return 1;
  require(std::gcd(a, m) == 1, ErrorCode::InvalidArgument, "element is not a unit");
  std::uint64_t x = a % m, k = 1;
  while (x != 1) {
    x = x * a % m;
    ++k;
  }
  return k;
}

// Polynomials over F_2 as bit masks (bit i = coefficient of x^i), degree <= 63.
namespace gf2 {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
  const int n = degree(f);
  a = reduce(a, f);
  std::uint64_t out = 0;
  while (b) {
    if (b & 1) out ^= a;
    b >>= 1;
    a <<= 1;
    if (degree(a) >= n) a ^= f;
  }
  return out;
}

/// Full product; both degrees must add up to at most 63.
inline std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
  require(a == 0 || b == 0 || degree(a) + degree(b) <= 63, ErrorCode::Unsupported, "F2 polynomial degree exceeds 63");
  return clmul(a, b);
}

inline std::pair<std::uint64_t, std::uint64_t> divmod(std::uint64_t a, std::uint64_t b) {
  require(b != 0, ErrorCode::InvalidArgument, "division by zero polynomial");
  const int db = degree(b);
  std::uint64_t q = 0;
  for (int d = degree(a); a != 0 && d >= db; d = degree(a)) {
    q |= std::uint64_t{1} << (d - db);
    a ^= b << (d - db);
  }
  return {q, a};
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a = divmod(a, b).second;
    std::swap(a, b);
  }
  return a;
}

inline std::uint64_t derivative(std::uint64_t a) {
  // odd exponents survive, shifted down by one
  return (a >> 1) & 0x5555555555555555ULL;
}

inline std::string str(std::uint64_t p) {
  if (p == 0) return "0";
  std::string out;
  for (int i = degree(p); i >= 0; --i) {
    if (!((p >> i) & 1)) continue;
    if (!out.empty()) out += " + ";
    out += i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i);
  }
  return out;
}

/// Berlekamp factorization of a squarefree polynomial into irreducibles (sorted).
inline std::vector<std::uint64_t> berlekamp_factor(std::uint64_t f) {
  const int n = degree(f);
  require(n >= 1, ErrorCode::InvalidArgument, "cannot factor a constant");
  require(gcd(f, derivative(f)) == 1, ErrorCode::InvalidArgument, "polynomial is not squarefree");
  // rows of Q - I: x^(2i) mod f minus x^i
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::uint64_t xi = std::uint64_t{1} << i;
    rows[static_cast<std::size_t>(i)] = mulmod(xi, xi, f) ^ xi;
  }
  // left kernel: vectors v with sum v_i rows_i = 0; eliminate with tracking
  std::vector<std::uint64_t> track(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) track[static_cast<std::size_t>(i)] = std::uint64_t{1} << i;
  std::size_t r = 0;
  for (int bit = 0; bit < n; ++bit) {
    std::size_t p = r;
    while (p < rows.size() && !((rows[p] >> bit) & 1)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    std::swap(track[p], track[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && ((rows[i] >> bit) & 1)) {
        rows[i] ^= rows[r];
        track[i] ^= track[r];
      }
    ++r;
  }
  std::vector<std::uint64_t> kernel(track.begin() + static_cast<std::ptrdiff_t>(r), track.end());
  const std::size_t count = kernel.size();
  std::vector<std::uint64_t> factors{f};
  for (std::uint64_t v : kernel) {
    if (factors.size() == count) break;
    std::vector<std::uint64_t> next;
    for (std::uint64_t g : factors) {
      if (degree(g) <= 1) {
        next.push_back(g);
        continue;
      }
      std::uint64_t a = gcd(g, v), b = gcd(g, v ^ 1);
      if (degree(a) >= 1 && degree(a) < degree(g)) {
        next.push_back(a);
        next.push_back(divmod(g, a).first);
      } else if (degree(b) >= 1 && degree(b) < degree(g)) {
        next.push_back(b);
        next.push_back(divmod(g, b).first);
      } else {
        next.push_back(g);
      }
    }
    factors = std::move(next);
  }
  require(factors.size() == count, ErrorCode::VerificationFailed, "Berlekamp splitting did not finish");
  std::sort(factors.begin(), factors.end());
  return factors;
}

inline std::uint64_t from_integer_poly(const IntPoly& p) {
  require(p.size() <= 64, ErrorCode::Unsupported, "F2 polynomial degree exceeds 63");
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (mod_floor(p[i], Integer(2)) == 1) out |= std::uint64_t{1} << i;
  return out;
}

}  // namespace gf2

struct CyclotomicFactorization {
  std::uint64_t d = 1;
  std::uint64_t order = 1;    // multiplicative order of 2 mod d
  std::uint64_t copies = 1;   // phi(d) / order
  std::uint64_t reduced = 0;  // Phi_d mod 2
  std::vector<std::uint64_t> factors;
};

inline CyclotomicFactorization factor_cyclotomic_mod2(std::uint64_t d) {
  require(d >= 1 && d % 2 == 1, ErrorCode::InvalidArgument, "index must be odd");
  CyclotomicFactorization out;
  out.d = d;
  out.order = multiplicative_order(2, d);
  const std::uint64_t phi = static_cast<std::uint64_t>(euler_phi(d));
  out.copies = phi / out.order;
  out.reduced = gf2::from_integer_poly(cyclotomic_polynomial(d));
  out.factors = gf2::berlekamp_factor(out.reduced);
  return out;
}

}  // namespace unil
