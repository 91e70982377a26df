#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace conepart {

enum class ConeKind { Orthant, SecondOrder };

/// One factor K_i of a multifold cone: the nonnegative orthant R^d_+ or the
/// Lorentz cone L_{d-1} = {(x0, xbar) in R^d : x0 >= ||xbar||_2}.
struct ConeBlock {
  ConeKind kind;
  int dim;

  ConeBlock(ConeKind k, int d) : kind(k), dim(d) {
    if (d < 1) throw std::invalid_argument("cone block dimension must be >= 1");
    // L_0 is the nonnegative half-line; normalize so there is one code path.
    if (kind == ConeKind::SecondOrder && dim == 1) kind = ConeKind::Orthant;
  }
};

inline ConeBlock orthant_block(int dim) { return {ConeKind::Orthant, dim}; }
inline ConeBlock soc_block(int dim) { return {ConeKind::SecondOrder, dim}; }

inline bool operator==(const ConeBlock& a, const ConeBlock& b) {
  return a.kind == b.kind && a.dim == b.dim;
}

/// Direct product K_1 x ... x K_r with prefix offsets into R^n.
class MultifoldCone {
 public:
  explicit MultifoldCone(std::vector<ConeBlock> blocks);

  int block_count() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return dim_; }
  const ConeBlock& block(int i) const { return blocks_.at(static_cast<size_t>(i)); }
  int offset(int i) const { return offsets_.at(static_cast<size_t>(i)); }
  const std::vector<ConeBlock>& blocks() const { return blocks_; }

  bool all_orthant() const;

 private:
  std::vector<ConeBlock> blocks_;
  std::vector<int> offsets_;  // prefix sums of block dims
  int dim_ = 0;
};

inline bool operator==(const MultifoldCone& a, const MultifoldCone& b) {
  return a.blocks() == b.blocks();
}

/// A point of R^n carrying the block structure it is sliced by.
struct BlockVector {
  Eigen::VectorXd data;
  MultifoldCone cone;

  BlockVector(Eigen::VectorXd d, MultifoldCone c) : data(std::move(d)), cone(std::move(c)) {
    if (data.size() != cone.dim())
      throw std::invalid_argument("block vector length does not match cone dimension");
  }
};

/// Signed distance-like membership scalar: > 0 interior, = 0 boundary,
/// < 0 outside. min_j v_j for the orthant, v0 - ||vbar|| for the Lorentz cone.
/// 1-Lipschitz in v and positively homogeneous.
double cone_margin(const ConeBlock& block, const Eigen::Ref<const Eigen::VectorXd>& v);

/// A unit-margin interior point: all-ones for the orthant, (1,0,...,0) for
/// the Lorentz cone.
Eigen::VectorXd canonical_interior_point(const ConeBlock& block);

/// Both supported block kinds are self-dual.
ConeBlock dual_block(const ConeBlock& block);

/// Contiguous sub-vector for block i (0-based).
Eigen::VectorXd block_slice(const BlockVector& v, int i);

// Whole-cone helpers used throughout the classifier.
Eigen::VectorXd canonical_interior_point(const MultifoldCone& cone);
std::vector<double> block_margins(const MultifoldCone& cone, const Eigen::Ref<const Eigen::VectorXd>& x);
double min_block_margin(const MultifoldCone& cone, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace conepart
