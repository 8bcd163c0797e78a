#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "unil/core/base.hpp"
#include "unil/core/errors.hpp"
#include "unil/groups/construct.hpp"
#include "unil/rings/constructions.hpp"

namespace unil {

/// Ring names accepted on the command line:
///   base            Z, Z[1/N], F2, F4, ...
///   base[zeta_m]    cyclotomic extension
///   R[G]            group ring over R, G in the group grammar (C_4, Q_8, ...)
///   R o_c C2, R o_-c C2, R o_c [i]   twisted quadratic extension of Z[zeta_{2^k}]
///   ... sign=-1     the x* = -x^-1 convention for the extension generator
/// Brackets chain left to right: "Z[1/3][zeta_3][C_2]".
inline InvolutiveRing parse_ring(const std::string& input) {
  std::string text = input;
  auto strip = [](std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
  };
  text = strip(text);
  int sign = 1;
  if (const auto pos = text.rfind("sign=-1"); pos != std::string::npos && pos + 7 == text.size()) {
    sign = -1;
    text = strip(text.substr(0, pos));
  }
  std::optional<QuadraticExtensionSpec> twist;
  for (const auto& [suffix, spec] : {std::pair<std::string, QuadraticExtensionSpec>{"o_c C2", {QuadraticTwist::Conjugation, 1, 1}},
                                     {"o_-c C2", {QuadraticTwist::NegativeConjugation, 1, 1}},
                                     {"o_c [i]", {QuadraticTwist::Conjugation, -1, 1}}}) {
    if (text.size() > suffix.size() && text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
      twist = spec;
      text = strip(text.substr(0, text.size() - suffix.size()));
      break;
    }
  }
  require(!(sign == -1 && !twist), ErrorCode::ParseError, "sign=-1 only applies to twisted extensions");
  if (twist) twist->generator_sign = sign;

  // base
  std::size_t pos = 0;
  std::string base_text;
  if (text.rfind("Z[1/", 0) == 0) {
    pos = text.find(']');
    require(pos != std::string::npos, ErrorCode::ParseError, "unterminated base in '" + input + "'");
    base_text = text.substr(0, pos + 1);
    ++pos;
  } else {
    while (pos < text.size() && text[pos] != '[') ++pos;
    base_text = strip(text.substr(0, pos));
  }
  const BasePID base = BasePID::parse(base_text);
  std::optional<InvolutiveRing> ring;
  std::uint64_t zeta = 0;  // m while the ring is exactly base[zeta_m], else 0
  while (pos < text.size()) {
    require(text[pos] == '[', ErrorCode::ParseError, "expected '[' in '" + input + "'");
    int depth = 0;
    std::size_t end = pos;
    for (; end < text.size(); ++end) {
      if (text[end] == '[') ++depth;
      if (text[end] == ']' && --depth == 0) break;
    }
    require(end < text.size(), ErrorCode::ParseError, "unbalanced brackets in '" + input + "'");
    const std::string inner = strip(text.substr(pos + 1, end - pos - 1));
    pos = end + 1;
    if (inner.rfind("zeta_", 0) == 0) {
      const std::string digits = inner.substr(5);
      require(!digits.empty() && digits.size() < 6 &&
                  std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }),
              ErrorCode::ParseError, "bad cyclotomic index in '" + input + "'");
      const std::uint64_t m = std::stoull(digits);
      require(m >= 1, ErrorCode::ParseError, "cyclotomic index must be positive");
      InvolutiveRing z = cyclotomic_ring(m, base);
      if (!ring) {
        ring = z;
        zeta = m;
      } else {
        ring = tensor_product(*ring, z, ring->name() + "[zeta_" + std::to_string(m) + "]");
        zeta = 0;
      }
    } else {
      FiniteGroup g = parse_group(inner);
      if (!ring) {
        ring = group_ring(base, g, base.name() + "[" + inner + "]");
      } else {
        ring = group_ring_over(*ring, g, ring->name() + "[" + inner + "]");
      }
      zeta = 0;
    }
  }
  if (!ring) {
    require(!twist, ErrorCode::ParseError, "twisted extension needs Z[zeta_m]");
    return cyclotomic_ring(1, base);
  }
  if (twist) {
    const std::uint64_t m = zeta;
    require(m >= 4 && is_power_of_two(m), ErrorCode::ParseError,
            "twisted extensions are defined for Z[zeta_m] with m a power of 2, m >= 4");
    return cyclotomic_quadratic_extension(m, *twist, base);
  }
  return *ring;
}

}  // namespace unil
