#pragma once

#include <vector>

#include "conepart/cone.hpp"
#include "conepart/exact_lp.hpp"

namespace conepart {

/// Image E_i = A_i B_i of a block's base set: a point for one-dimensional
/// blocks, the convex hull of the block's columns for orthant blocks (base
/// set = unit simplex), and center + generators for Lorentz blocks (base set
/// = {1} x unit ball). A two-dimensional Lorentz block degenerates to a
/// segment and is stored as a two-vertex polytope.
struct BaseSetImage {
  enum class Kind { Point, Polytope, Ellipsoid };
  Kind kind = Kind::Point;
  int block_index = 0;
  std::vector<RationalVector> vertices;  // Point: one entry; Polytope: >= 2
  RationalVector center;                 // Ellipsoid
  RationalMatrix generators;             // Ellipsoid: m x (n_i - 1)
};

struct LinealityBasis {
  enum class Which { OfAK, OfClosureAK };
  Which which = Which::OfAK;
  std::vector<RationalVector> basis;  // linearly independent m-vectors
};

// Exact linear algebra helpers (rational Gaussian elimination).
std::vector<RationalVector> span_basis(const std::vector<RationalVector>& vecs);
bool in_span(const std::vector<RationalVector>& basis, const RationalVector& v);

BaseSetImage ellipsoid_image(const RationalMatrix& A, const MultifoldCone& cone, int i);

/// Lin(A R^n_+) for an all-orthant system: the span of the columns a_i with
/// -a_i in A R^n_+ (image cones of polyhedral systems are closed and
/// column-generated, which is what makes this exact).
LinealityBasis lineality_space_polyhedral(const RationalMatrix& A);

/// For a polytopal E: checks "all vertices lie in span L" against "the
/// vertex average lies in span L" (a relative-interior point) and returns
/// the common verdict; a disagreement would falsify the implementation and
/// throws.
bool remark1_inclusion_check(const BaseSetImage& E, const LinealityBasis& L);

/// Column classification by lineality membership (the geometric description
/// of the Goldman-Tucker partition); must coincide with gt_partition_exact.
GtPartition geometric_classify_polyhedral(const RationalMatrix& A);

/// How a base-set image sits relative to a linear subspace, decided exactly:
/// Disjoint (E n L empty), Touches (E n L nonempty, ri E n L empty) or
/// CrossesRelint (ri E n L nonempty).
enum class SubspaceRelation { Disjoint, Touches, CrossesRelint };
SubspaceRelation base_set_subspace_relation(const BaseSetImage& E,
                                            const std::vector<RationalVector>& subspace_basis);

/// The geometric characterization applied with caller-supplied lineality
/// spaces: B from ri E_i n Lin(AK), N from E_i n Lin(cl AK) = empty, B0 and
/// N0 with the roles of the two subspaces exchanged.
struct GeometricBaseSets {
  std::vector<int> B, N, B0, N0;
};
GeometricBaseSets proposition4_classify(const std::vector<BaseSetImage>& images,
                                        const LinealityBasis& lin_ak,
                                        const LinealityBasis& lin_cl_ak);

}  // namespace conepart
