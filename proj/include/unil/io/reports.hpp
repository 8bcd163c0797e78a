#pragma once

#include <string>
#include <vector>

#include "unil/groups/analysis.hpp"
#include "unil/io/json.hpp"
#include "unil/nilpotent/nilpotent.hpp"
#include "unil/rings/constructions.hpp"
#include "unil/rings/polynomial.hpp"
#include "unil/tate/tate.hpp"

namespace unil {

// Matrices over Z, Z[1/2] or F_p: entries are integers or "p/q" strings.
inline Json cmat_to_json(const CMat& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& q = m(i, j).value();
      if (q.is_integer()) row.push_back(integer_to_json(q.num()));
      else row.push_back(q.str());
    }
    out.push_back(row);
  }
  return out;
}

inline CMat cmat_from_json(const Json& j, const CoefficientRing& r) {
  require(j.is_array(), ErrorCode::ParseError, "matrix must be an array of rows");
  const std::size_t n = j.size();
  std::size_t cols = n == 0 ? 0 : j[0].size();
  CMat m(n, cols, r.zero());
  for (std::size_t i = 0; i < n; ++i) {
    require(j[i].is_array() && j[i].size() == cols, ErrorCode::ParseError, "ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) {
      const Json& x = j[i][k];
      Rational q;
      if (x.is_number_integer()) q = Rational(Integer(x.get<long long>()));
      else if (x.is_string()) q = Rational::parse(x.get<std::string>());
      else fail(ErrorCode::ParseError, "matrix entries must be integers or strings");
      Coeff c(q);
      require(r.contains(c), ErrorCode::InvalidArgument, "entry " + q.str() + " does not lie in " + r.name());
      m(i, k) = r.embed(c);
    }
  }
  return m;
}

inline Json mv_report_to_json(const MayerVietorisReport& rep) {
  Json spots = Json::array();
  for (const auto& s : rep.spots)
    spots.push_back({{"name", s.name},
                     {"group", group_value_to_json(s.group)},
                     {"kernel_dim", s.kernel_dim},
                     {"image_dim", s.image_dim},
                     {"exact", s.exact}});
  return {{"square", rep.square}, {"exact", rep.exact()}, {"spots", spots}};
}

inline Json sqrt_report_to_json(const SquareRootResult& r) {
  return {{"v", cmat_to_json(r.v)},
          {"terms", r.terms},
          {"squares_to_inverse", r.squares_to_inverse},
          {"commutes", r.commutes},
          {"ok", r.ok()}};
}

inline Json lagrangian_report_to_json(const LagrangianTransportReport& r) {
  Json v = Json::array();
  for (int d = 0; d <= r.v.degree(); ++d) v.push_back(cmat_to_json(r.v.coefficient(std::size_t(d))));
  return {{"ring", r.ring.name()},
          {"nu", cmat_to_json(r.nu)},
          {"index", r.index},
          {"v_coefficients", v},
          {"self_adjoint", r.self_adjoint},
          {"v_adjoint", r.v_adjoint},
          {"transported", r.transported},
          {"ok", r.ok()}};
}

inline Json special_class_to_json(const Special2Class& c) {
  Json j = {{"kind", special_kind_name(c.kind)}};
  if (c.kind != SpecialKind::NotSpecial && c.kind != SpecialKind::Not2Group) j["e"] = c.e;
  return j;
}

inline Json double_cosets_to_json(const FiniteGroup& g, const Subgroup& h, const std::vector<DoubleCoset>& dcs) {
  Json list = Json::array();
  std::size_t total = 0;
  for (const auto& dc : dcs) {
    list.push_back({{"representative", dc.representative},
                    {"name", g.name(dc.representative)},
                    {"stabilizer", dc.stabilizer.elements()},
                    {"orbit_size", dc.orbit_size}});
    total += dc.orbit_size;
  }
  return {{"double_cosets", list}, {"count", dcs.size()}, {"index_sum", total}, {"index", g.order() / h.order()}};
}

inline Json crt_to_json(const CrtSplitting& s) {
  Json factors = Json::array();
  for (std::size_t k = 0; k < s.divisors.size(); ++k)
    factors.push_back({{"d", s.divisors[k]}, {"rank", static_cast<std::size_t>(euler_phi(s.divisors[k]))}});
  return {{"base", s.source->base().name()},
          {"n", s.source->rank()},
          {"factors", factors},
          {"unital", s.check.unital},
          {"multiplicative", s.check.multiplicative},
          {"involutive", s.check.involutive},
          {"determinant", s.determinant.str()},
          {"bijective", s.bijective}};
}

inline Json factorization_to_json(const CyclotomicFactorization& f) {
  Json factors = Json::array();
  for (auto p : f.factors) factors.push_back(gf2::str(p));
  return {{"d", f.d}, {"order_of_2", f.order}, {"copies", f.copies}, {"reduced", gf2::str(f.reduced)}, {"factors", factors}};
}

inline Json radical_to_json(const RadicalNilpotency& r) { return {{"index", r.index}, {"dimensions", r.dimensions}}; }

}  // namespace unil
