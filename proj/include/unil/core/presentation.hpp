#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "unil/core/abelian.hpp"
#include "unil/core/lattice.hpp"
#include "unil/core/matrix.hpp"

namespace unil {

/// Z^generators / (row span of relations). Homomorphisms between presentations
/// are integer matrices whose row i is the image of generator i.
struct AbelianPresentation {
  std::size_t generators = 0;
  Mat relations;  // rows, each of length `generators`

  static AbelianPresentation free(std::size_t rank) { return {rank, Mat(0, rank)}; }

  static AbelianPresentation of(const FgAbelianGroup& g) {
    const std::size_t n = g.free_rank() + g.torsion().size();
    Mat rel(g.torsion().size(), n);
    for (std::size_t i = 0; i < g.torsion().size(); ++i) rel(i, g.free_rank() + i) = Scalar(g.torsion()[i]);
    return {n, rel};
  }

  FgAbelianGroup group() const { return quotient_group(generators, relations); }

  Lattice relation_lattice() const {
    return Lattice::span(BasePID::integers(), generators, relations.rows() ? relations : Mat(0, generators));
  }
};

/// True when the matrix sends every relation of `source` into the relations of `target`.
inline bool is_well_defined(const AbelianPresentation& source, const AbelianPresentation& target, const Mat& m) {
  require(m.rows() == source.generators && m.cols() == target.generators, ErrorCode::InvalidArgument,
          "homomorphism matrix has the wrong shape");
  if (source.relations.rows() == 0) return true;
  Mat images = source.relations * m;
  Lattice rel = target.relation_lattice();
  for (std::size_t i = 0; i < images.rows(); ++i)
    if (!rel.contains(images.row(i))) return false;
  return true;
}

struct DiagramArrow {
  std::size_t source = 0;
  std::size_t target = 0;
  Mat matrix;
};

struct AbelianDiagram {
  std::vector<AbelianPresentation> objects;
  std::vector<DiagramArrow> arrows;

  void validate() const {
    for (const auto& a : arrows) {
      require(a.source < objects.size() && a.target < objects.size(), ErrorCode::InvalidArgument,
              "diagram arrow refers to a missing object");
      require(is_well_defined(objects[a.source], objects[a.target], a.matrix), ErrorCode::InvalidArgument,
              "diagram arrow " + std::to_string(a.source) + " -> " + std::to_string(a.target) +
                  " does not preserve relations");
    }
  }
};

/// Colimit as the coequalizer presentation: direct sum of the objects modulo
/// x - f(x) for every arrow f.
inline FgAbelianGroup colimit(const AbelianDiagram& diagram) {
  diagram.validate();
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const auto& o : diagram.objects) {
    offset.push_back(total);
    total += o.generators;
  }
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < diagram.objects.size(); ++k) {
    const auto& o = diagram.objects[k];
    for (std::size_t i = 0; i < o.relations.rows(); ++i) {
      Vec r(total);
      for (std::size_t j = 0; j < o.generators; ++j) r[offset[k] + j] = o.relations(i, j);
      rows.push_back(r);
    }
  }
  for (const auto& a : diagram.arrows) {
    for (std::size_t i = 0; i < diagram.objects[a.source].generators; ++i) {
      Vec r(total);
      r[offset[a.source] + i] += 1;
      for (std::size_t j = 0; j < diagram.objects[a.target].generators; ++j)
        r[offset[a.target] + j] -= a.matrix(i, j);
      rows.push_back(r);
    }
  }
  return quotient_group(total, Mat::from_rows(rows, total));
}

/// M / <x - g x>, where each action matrix (row i = image of generator i) must
/// induce an automorphism of the presented group.
inline FgAbelianGroup coinvariants(const AbelianPresentation& module, const std::vector<Mat>& action) {
  const std::size_t n = module.generators;
  Lattice rel = module.relation_lattice();
  Lattice everything = Lattice::full(BasePID::integers(), n);
  Mat relations = module.relations.rows() ? module.relations : Mat(0, n);
  for (std::size_t g = 0; g < action.size(); ++g) {
    const Mat& a = action[g];
    require(a.rows() == n && a.cols() == n, ErrorCode::InvalidArgument, "action matrix has the wrong shape");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        require(a(i, j).is_integer() && a(i, j).rational().is_integer(), ErrorCode::InvalidArgument,
                "action matrices must be integral");
    if (!is_well_defined(module, module, a))
      fail(ErrorCode::ActionNotAutomorphism, "action matrix " + std::to_string(g) + " does not preserve the relations");
    Lattice image = Lattice::span(BasePID::integers(), n, Mat::vstack(a, relations));
    if (!image.contains(everything))
      fail(ErrorCode::ActionNotAutomorphism, "action matrix " + std::to_string(g) + " is not invertible modulo the relations");
  }
  Mat stacked = relations;
  for (const auto& a : action) stacked = Mat::vstack(stacked, a - Mat::identity(n));
  return quotient_group(n, stacked);
}

}  // namespace unil
