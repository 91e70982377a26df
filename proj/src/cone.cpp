#include "conepart/cone.hpp"

namespace conepart {

MultifoldCone::MultifoldCone(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw std::invalid_argument("multifold cone needs at least one block");
  offsets_.reserve(blocks_.size());
  for (const ConeBlock& b : blocks_) {
    offsets_.push_back(dim_);
    dim_ += b.dim;
  }
}

bool MultifoldCone::all_orthant() const {
  for (const ConeBlock& b : blocks_)
    if (b.kind != ConeKind::Orthant) return false;
  return true;
}

double cone_margin(const ConeBlock& block, const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != block.dim)
    throw std::invalid_argument("cone_margin: vector length does not match block dimension");
  if (block.kind == ConeKind::Orthant) return v.minCoeff();
  return v[0] - v.tail(v.size() - 1).norm();
}

Eigen::VectorXd canonical_interior_point(const ConeBlock& block) {
  if (block.kind == ConeKind::Orthant) return Eigen::VectorXd::Ones(block.dim);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(block.dim);
  e[0] = 1.0;
  return e;
}

ConeBlock dual_block(const ConeBlock& block) { return block; }

Eigen::VectorXd block_slice(const BlockVector& v, int i) {
  if (i < 0 || i >= v.cone.block_count())
    throw std::out_of_range("block_slice: block index out of range");
  return v.data.segment(v.cone.offset(i), v.cone.block(i).dim);
}

Eigen::VectorXd canonical_interior_point(const MultifoldCone& cone) {
  Eigen::VectorXd e(cone.dim());
  for (int i = 0; i < cone.block_count(); ++i)
    e.segment(cone.offset(i), cone.block(i).dim) = canonical_interior_point(cone.block(i));
  return e;
}

std::vector<double> block_margins(const MultifoldCone& cone, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != cone.dim())
    throw std::invalid_argument("block_margins: vector length does not match cone dimension");
  std::vector<double> margins(static_cast<size_t>(cone.block_count()));
  for (int i = 0; i < cone.block_count(); ++i)
    margins[static_cast<size_t>(i)] = cone_margin(cone.block(i), x.segment(cone.offset(i), cone.block(i).dim));
  return margins;
}

double min_block_margin(const MultifoldCone& cone, const Eigen::Ref<const Eigen::VectorXd>& x) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : block_margins(cone, x)) m = std::min(m, v);
  return m;
}

}  // namespace conepart
