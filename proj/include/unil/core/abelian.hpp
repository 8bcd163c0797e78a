#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "unil/core/integer.hpp"
#include "unil/core/matrix.hpp"
#include "unil/core/smith.hpp"

namespace unil {

/// Finitely generated abelian group Z^r + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... and d_i >= 2.
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;

  /// Canonical form of Z^free + sum Z/orders[i]; orders need not form a chain.
  static FgAbelianGroup from_cyclic_factors(std::size_t free, const std::vector<Integer>& orders) {
    std::vector<Integer> nontrivial;
    for (const auto& d : orders) {
      require(d >= 0, ErrorCode::InvalidArgument, "negative cyclic order");
      if (d == 0)
        ++free;
      else if (d != 1)
        nontrivial.push_back(d);
    }
    FgAbelianGroup g;
    g.free_rank_ = free;
    if (nontrivial.empty()) return g;
    Mat diag(nontrivial.size(), nontrivial.size());
    for (std::size_t i = 0; i < nontrivial.size(); ++i) diag(i, i) = Scalar(nontrivial[i]);
    SmithForm s = smith_normal_form(diag);
    for (std::size_t i = 0; i < s.rank; ++i) {
      Integer d = s.D(i, i).rational().num();
      if (d != 1) g.torsion_.push_back(d);
    }
    return g;
  }

  static FgAbelianGroup free(std::size_t rank) { return from_cyclic_factors(rank, {}); }
  static FgAbelianGroup cyclic(const Integer& d) { return from_cyclic_factors(0, {d}); }
  static FgAbelianGroup elementary(std::size_t count, const Integer& p) {
    return from_cyclic_factors(0, std::vector<Integer>(count, p));
  }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }

  Integer order() const {
    require(is_finite(), ErrorCode::InvalidArgument, "infinite group has no finite order");
    Integer n = 1;
    for (const auto& d : torsion_) n *= d;
    return n;
  }

  /// True when every invariant factor equals p (and there is no free part).
  bool is_elementary(const Integer& p) const {
    return free_rank_ == 0 && std::all_of(torsion_.begin(), torsion_.end(), [&](const Integer& d) { return d == p; });
  }

  FgAbelianGroup direct_sum(const FgAbelianGroup& other) const {
    std::vector<Integer> all = torsion_;
    all.insert(all.end(), other.torsion_.begin(), other.torsion_.end());
    return from_cyclic_factors(free_rank_ + other.free_rank_, all);
  }

  std::string str() const {
    if (is_trivial()) return "0";
    std::string out;
    auto append = [&](const std::string& s) { out += out.empty() ? s : " + " + s; };
    if (free_rank_ == 1) append("Z");
    if (free_rank_ > 1) append("Z^" + std::to_string(free_rank_));
    for (const auto& d : torsion_) append("Z/" + d.str());
    return out;
  }

  friend bool operator==(const FgAbelianGroup& a, const FgAbelianGroup& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
  }
  friend bool operator!=(const FgAbelianGroup& a, const FgAbelianGroup& b) { return !(a == b); }

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> torsion_;
};

/// Z^rank modulo the row span of the relation matrix.
inline FgAbelianGroup quotient_group(std::size_t generators_rank, const Mat& relations) {
  if (relations.rows() == 0) return FgAbelianGroup::free(generators_rank);
  require(relations.cols() == generators_rank, ErrorCode::InvalidArgument,
          "relation matrix has " + std::to_string(relations.cols()) + " columns, expected " +
              std::to_string(generators_rank));
  SmithForm s = smith_normal_form(relations);
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < s.rank; ++i) orders.push_back(s.D(i, i).rational().num());
  return FgAbelianGroup::from_cyclic_factors(generators_rank - s.rank, orders);
}

}  // namespace unil
