#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "unil/core/abelian.hpp"
#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/core/matrix.hpp"
#include "unil/groups/finite_group.hpp"
#include "unil/rings/ring.hpp"

namespace unil {

using Json = nlohmann::json;

// Scalars travel as strings: "3", "-1/2"; over F_{2^k} with k > 1 as "g<bits>".
inline Json scalar_to_json(const Scalar& s) { return s.str(); }

inline Scalar scalar_from_json(const Json& j, const BasePID& base) {
  if (j.is_number_integer()) return base.embed(Scalar(j.get<long long>()));
  require(j.is_string(), ErrorCode::ParseError, "scalar must be a string or an integer");
  const std::string text = j.get<std::string>();
  if (base.is_field() && !text.empty() && text[0] == 'g') {
    try {
      return Scalar::field_element(std::stoull(text.substr(1)), base.modulus());
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad field element '" + text + "'");
    }
  }
  Rational q;
  try {
    q = Rational::parse(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad scalar '" + text + "'");
  }
  require(base.contains(Scalar(q)), ErrorCode::ParseError, "scalar " + text + " does not lie in " + base.name());
  return base.embed(Scalar(q));
}

inline Json vector_to_json(const Vec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

inline Vec vector_from_json(const Json& j, const BasePID& base) {
  require(j.is_array(), ErrorCode::ParseError, "vector must be an array");
  Vec out;
  for (const auto& x : j) out.push_back(scalar_from_json(x, base));
  return out;
}

inline Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i)));
  return out;
}

inline Mat matrix_from_json(const Json& j, const BasePID& base, std::size_t cols_if_empty = 0) {
  require(j.is_array(), ErrorCode::ParseError, "matrix must be an array of rows");
  std::vector<Vec> rows;
  for (const auto& r : j) rows.push_back(vector_from_json(r, base));
  const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  for (const auto& r : rows) require(r.size() == cols, ErrorCode::ParseError, "ragged matrix");
  return Mat::from_rows(rows, cols);
}

inline Json integer_to_json(const Integer& n) {
  if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max())
    return static_cast<long long>(n);
  return n.str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  require(j.is_string(), ErrorCode::ParseError, "integer must be a number or a string");
  try {
    return Integer(j.get<std::string>());
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad integer '" + j.get<std::string>() + "'");
  }
}

inline Json group_value_to_json(const FgAbelianGroup& g) {
  Json t = Json::array();
  for (const auto& d : g.torsion()) t.push_back(integer_to_json(d));
  return {{"free_rank", g.free_rank()}, {"torsion", t}};
}

inline FgAbelianGroup group_value_from_json(const Json& j) {
  require(j.is_object() && j.contains("free_rank") && j.contains("torsion"), ErrorCode::ParseError,
          "abelian group needs free_rank and torsion");
  std::vector<Integer> t;
  for (const auto& d : j.at("torsion")) t.push_back(integer_from_json(d));
  return FgAbelianGroup::from_cyclic_factors(j.at("free_rank").get<std::size_t>(), t);
}

inline Json group_to_json(const FiniteGroup& g) {
  return {{"order", g.order()}, {"table", g.table()}, {"names", g.names()}};
}

inline FiniteGroup group_from_json(const Json& j) {
  require(j.is_object() && j.contains("table"), ErrorCode::ParseError, "group needs a table");
  std::vector<std::vector<int>> table;
  try {
    table = j.at("table").get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::ParseError, "group table must be a matrix of integers");
  }
  if (j.contains("order"))
    require(j.at("order").get<std::size_t>() == table.size(), ErrorCode::InvalidPresentation, "order does not match the table");
  std::vector<std::string> names;
  if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
  return FiniteGroup(table, names);
}

/// {"base", "rank", "one", "mul", "inv", "name", "basis"}: mul[i][j] is the
/// coordinate vector of e_i e_j; inv is the involution matrix by rows
/// (column j holds the image of e_j).
inline Json ring_to_json(const InvolutiveRing& r) {
  Json mul = Json::array();
  for (std::size_t i = 0; i < r.rank(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < r.rank(); ++j) {
      Vec v = r.zero();
      for (const auto& t : r.basis_product(i, j)) v[t.index] = t.coeff;
      row.push_back(vector_to_json(v));
    }
    mul.push_back(row);
  }
  return {{"base", r.base().name()}, {"rank", r.rank()},        {"one", vector_to_json(r.one())}, {"mul", mul},
          {"inv", matrix_to_json(r.involution())}, {"name", r.name()}, {"basis", r.basis_names()}};
}

inline InvolutiveRing ring_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::ParseError, "ring must be an object");
  for (const char* key : {"base", "rank", "one", "mul", "inv"})
    require(j.contains(key), ErrorCode::ParseError, std::string("ring is missing '") + key + "'");
  const BasePID base = BasePID::parse(j.at("base").get<std::string>());
  const std::size_t r = j.at("rank").get<std::size_t>();
  Vec one = vector_from_json(j.at("one"), base);
  std::vector<std::vector<Vec>> mul;
  for (const auto& row : j.at("mul")) {
    std::vector<Vec> out;
    for (const auto& cell : row) out.push_back(vector_from_json(cell, base));
    mul.push_back(out);
  }
  Mat inv = matrix_from_json(j.at("inv"), base, r);
  require(one.size() == r, ErrorCode::ParseError, "unit length does not match rank");
  std::vector<std::string> names;
  if (j.contains("basis")) names = j.at("basis").get<std::vector<std::string>>();
  return InvolutiveRing::from_dense(base, mul, one, inv, j.value("name", std::string("R")), names);
}

}  // namespace unil
