#pragma once

#include <cstddef>
#include <vector>

#include "unil/core/base.hpp"
#include "unil/core/integer.hpp"
#include "unil/core/matrix.hpp"

namespace unil {

/// U * M * V = D with U, V invertible over the base and D diagonal with
/// d_1 | d_2 | ... ; rank counts the nonzero diagonal entries.
struct SmithForm {
  Mat U, D, V, U_inv, V_inv;
  std::size_t rank = 0;

  Scalar diagonal(std::size_t i) const { return D(i, i); }
};

namespace detail {

struct IntegerSmith {
  Matrix<Integer> U, D, V, U_inv, V_inv;
  std::size_t rank = 0;
};

inline IntegerSmith integer_smith(Matrix<Integer> a) {
  const std::size_t m = a.rows(), n = a.cols();
  IntegerSmith s;
  s.U = Matrix<Integer>::identity(m);
  s.U_inv = Matrix<Integer>::identity(m);
  s.V = Matrix<Integer>::identity(n);
  s.V_inv = Matrix<Integer>::identity(n);

  // Row operations act on U (left) and on U_inv (right, inversely); columns likewise.
  auto row_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row(dst, src, f);
    s.U.add_row(dst, src, f);
    s.U_inv.add_col(src, dst, Integer(-f));
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col(dst, src, f);
    s.V.add_col(dst, src, f);
    s.V_inv.add_row(src, dst, Integer(-f));
  };
  auto row_swap = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    s.U.swap_rows(x, y);
    s.U_inv.swap_cols(x, y);
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    s.V.swap_cols(x, y);
    s.V_inv.swap_rows(x, y);
  };

  std::size_t t = 0;
  for (; t < m && t < n; ++t) {
    bool found = false;
    std::size_t pi = t, pj = t;
    Integer best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a(i, j) != 0 && (!found || abs_value(a(i, j)) < best)) {
          found = true;
          best = abs_value(a(i, j));
          pi = i;
          pj = j;
        }
    if (!found) break;
    row_swap(t, pi);
    col_swap(t, pj);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        row_add(i, t, Integer(-q));
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        col_add(j, t, Integer(-q));
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // move the smallest leftover in row/column t to the pivot
        std::size_t bi = t, bj = t;
        Integer b = abs_value(a(t, t));
        for (std::size_t i = t + 1; i < m; ++i)
          if (a(i, t) != 0 && abs_value(a(i, t)) < b) {
            b = abs_value(a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(t, j) != 0 && abs_value(a(t, j)) < b) {
            b = abs_value(a(t, j));
            bi = t;
            bj = j;
          }
        row_swap(t, bi);
        col_swap(t, bj);
        continue;
      }
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a(i, j) % a(t, t) != 0) {
            row_add(t, i, Integer(1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (a(t, t) < 0) {
      a.scale_row(t, Integer(-1));
      s.U.scale_row(t, Integer(-1));
      s.U_inv.scale_col(t, Integer(-1));
    }
  }
  s.rank = t;
  s.D = std::move(a);
  return s;
}

inline Mat to_scalar_matrix(const Matrix<Integer>& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Scalar(m(i, j));
  return out;
}

inline SmithForm field_smith(const Mat& input, const BasePID& base) {
  Mat a = embed_matrix(input, base);
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm s;
  s.U = Mat::identity(m, base.one());
  s.U_inv = Mat::identity(m, base.one());
  s.V = Mat::identity(n, base.one());
  s.V_inv = Mat::identity(n, base.one());
  std::size_t t = 0;
  for (; t < m && t < n; ++t) {
    std::size_t pi = m, pj = n;
    for (std::size_t j = t; j < n && pi == m; ++j)
      for (std::size_t i = t; i < m; ++i)
        if (!a(i, j).is_zero()) {
          pi = i;
          pj = j;
          break;
        }
    if (pi == m) break;
    a.swap_rows(t, pi);
    s.U.swap_rows(t, pi);
    s.U_inv.swap_cols(t, pi);
    a.swap_cols(t, pj);
    s.V.swap_cols(t, pj);
    s.V_inv.swap_rows(t, pj);
    Scalar p = a(t, t), pinv = p.inverse();
    a.scale_row(t, pinv);
    s.U.scale_row(t, pinv);
    s.U_inv.scale_col(t, p);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == t || a(i, t).is_zero()) continue;
      Scalar f = -a(i, t);
      a.add_row(i, t, f);
      s.U.add_row(i, t, f);
      s.U_inv.add_col(t, i, -f);
    }
    for (std::size_t j = t + 1; j < n; ++j) {
      if (a(t, j).is_zero()) continue;
      Scalar f = -a(t, j);
      a.add_col(j, t, f);
      s.V.add_col(j, t, f);
      s.V_inv.add_row(t, j, -f);
    }
  }
  s.rank = t;
  s.D = a;
  return s;
}

}  // namespace detail

/// Smith normal form over Z, Z[1/N] (denominators cleared, inverted primes
/// stripped from the invariant factors) or F_{2^k} (diagonal of ones and zeros).
inline SmithForm smith_normal_form(const Mat& m, const BasePID& base = BasePID::integers()) {
  if (base.is_field()) return detail::field_smith(m, base);

  Integer c = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      require(base.contains(m(i, j)), ErrorCode::InvalidArgument,
              "matrix entry " + m(i, j).str() + " does not lie in " + base.name());
      c = lcm(c, m(i, j).rational().den());
    }
  Matrix<Integer> a(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& q = m(i, j).rational();
      a(i, j) = q.num() * (c / q.den());
    }
  detail::IntegerSmith is = detail::integer_smith(std::move(a));
  SmithForm s;
  s.U = detail::to_scalar_matrix(is.U);
  s.U_inv = detail::to_scalar_matrix(is.U_inv);
  s.V = detail::to_scalar_matrix(is.V);
  s.V_inv = detail::to_scalar_matrix(is.V_inv);
  s.D = Mat(m.rows(), m.cols());
  s.rank = is.rank;
  for (std::size_t i = 0; i < is.rank; ++i) {
    const Integer& d = is.D(i, i);
    Integer stripped = strip_primes(d, base.inverted_primes());
    // U * (c M) * V = D'  ==>  (w U) M V = diag(stripped) with w = stripped * c / d a unit
    Rational w(stripped * c, d);
    if (!(w == Rational(1))) {
      s.U.scale_row(i, Scalar(w));
      s.U_inv.scale_col(i, Scalar(Rational(1) / w));
    }
    s.D(i, i) = Scalar(stripped);
  }
  return s;
}

}  // namespace unil
