#include "conepart/geometry.hpp"

#include <stdexcept>

namespace conepart {

namespace {

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> rref(std::vector<RationalVector>& rows) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  size_t ncols = rows[0].size();
  size_t lead = 0;
  for (size_t r = 0; r < rows.size() && lead < ncols; ++r) {
    size_t p = r;
    while (p < rows.size() && rows[p][lead] == 0) {
      ++p;
      if (p == rows.size()) {
        p = r;
        ++lead;
        if (lead == ncols) return pivots;
      }
    }
    std::swap(rows[p], rows[r]);
    Rational piv = rows[r][lead];
    for (size_t c = 0; c < ncols; ++c) rows[r][c] /= piv;
    for (size_t k = 0; k < rows.size(); ++k) {
      if (k == r) continue;
      Rational f = rows[k][lead];
      if (f == 0) continue;
      for (size_t c = 0; c < ncols; ++c) rows[k][c] -= f * rows[r][c];
    }
    pivots.push_back(static_cast<int>(lead));
    ++lead;
  }
  return pivots;
}

// Basis of the nullspace of the matrix whose rows are 'rows'.
std::vector<RationalVector> nullspace_basis(std::vector<RationalVector> rows, int dim) {
  std::vector<int> pivots = rref(rows);
  std::vector<bool> is_pivot(static_cast<size_t>(dim), false);
  for (int p : pivots) is_pivot[static_cast<size_t>(p)] = true;
  std::vector<RationalVector> out;
  for (int freec = 0; freec < dim; ++freec) {
    if (is_pivot[static_cast<size_t>(freec)]) continue;
    RationalVector v(static_cast<size_t>(dim), Rational(0));
    v[static_cast<size_t>(freec)] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<size_t>(pivots[r])] = -rows[r][static_cast<size_t>(freec)];
    out.push_back(std::move(v));
  }
  return out;
}

RationalVector block_column_sum(const RationalMatrix& A, int col_begin, int count) {
  RationalVector v(static_cast<size_t>(A.rows), Rational(0));
  for (int k = 0; k < A.rows; ++k)
    for (int j = 0; j < count; ++j) v[static_cast<size_t>(k)] += A.at(k, col_begin + j);
  return v;
}

// Exact feasibility of { sum_j lambda_j v_j in span(L), lambda >= 0,
// sum lambda = 1 } and its strict variant lambda > 0, decided by one LP.
SubspaceRelation polytope_relation(const std::vector<RationalVector>& verts,
                                   const std::vector<RationalVector>& L) {
  const int m = static_cast<int>(verts[0].size());
  const int k = static_cast<int>(verts.size());
  const int l = static_cast<int>(L.size());

  // relint test: max t s.t. sum lambda_j v_j - sum mu b = 0, sum lambda = 1,
  // lambda_j - t - s_j = 0, 0 <= t <= 1.
  {
    const int cols = k + l + 1 + k;  // lambda, mu, t, s
    RationalMatrix G(m + 1 + k, cols);
    RationalVector b(static_cast<size_t>(m + 1 + k), Rational(0));
    for (int row = 0; row < m; ++row) {
      for (int j = 0; j < k; ++j) G.at(row, j) = verts[static_cast<size_t>(j)][static_cast<size_t>(row)];
      for (int j = 0; j < l; ++j) G.at(row, k + j) = -L[static_cast<size_t>(j)][static_cast<size_t>(row)];
    }
    for (int j = 0; j < k; ++j) G.at(m, j) = 1;
    b[static_cast<size_t>(m)] = 1;
    for (int j = 0; j < k; ++j) {
      G.at(m + 1 + j, j) = 1;
      G.at(m + 1 + j, k + l) = -1;
      G.at(m + 1 + j, k + l + 1 + j) = -1;
    }
    RationalVector c(static_cast<size_t>(cols), Rational(0));
    c[static_cast<size_t>(k + l)] = 1;
    std::vector<VarBound> bounds(static_cast<size_t>(cols), VarBound::nonneg());
    for (int j = 0; j < l; ++j) bounds[static_cast<size_t>(k + j)] = VarBound::free_var();
    bounds[static_cast<size_t>(k + l)] = VarBound::range(0, 1);
    LpResult res = solve_lp_exact(c, G, b, bounds);
    if (res.status == LpStatus::Optimal && res.optimal_value > 0) return SubspaceRelation::CrossesRelint;
    if (res.status == LpStatus::Optimal) return SubspaceRelation::Touches;  // feasible with t = 0
  }
  return SubspaceRelation::Disjoint;
}

// Min-norm parameter of the ellipsoid {c + G u : ||u|| <= 1} restricted to a
// subspace: solve H u = h with minimal ||u|| over the rationals and compare
// ||u||^2 against 1.
SubspaceRelation ellipsoid_relation(const RationalVector& center, const RationalMatrix& G,
                                    const std::vector<RationalVector>& L) {
  const int m = static_cast<int>(center.size());
  const int g = G.cols;
  std::vector<RationalVector> comp = nullspace_basis(L, m);  // basis of span(L)^perp
  // constraints w^T (center + G u) = 0 for each complement direction w
  std::vector<RationalVector> H;
  RationalVector h;
  for (const RationalVector& w : comp) {
    RationalVector row(static_cast<size_t>(g), Rational(0));
    Rational rhs = 0;
    for (int r = 0; r < m; ++r) {
      rhs -= w[static_cast<size_t>(r)] * center[static_cast<size_t>(r)];
      for (int cidx = 0; cidx < g; ++cidx)
        row[static_cast<size_t>(cidx)] += w[static_cast<size_t>(r)] * G.at(r, cidx);
    }
    H.push_back(std::move(row));
    h.push_back(rhs);
  }
  if (H.empty()) return SubspaceRelation::CrossesRelint;  // subspace is everything

  // reduce [H | h]: consistency and an independent row subset
  std::vector<RationalVector> aug = H;
  for (size_t r = 0; r < aug.size(); ++r) aug[r].push_back(h[r]);
  std::vector<int> pivots = rref(aug);
  std::vector<RationalVector> Hind;
  RationalVector hind;
  for (size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == g) return SubspaceRelation::Disjoint;  // 0 = 1 row: no intersection
    RationalVector row(aug[r].begin(), aug[r].begin() + g);
    Hind.push_back(std::move(row));
    hind.push_back(aug[r][static_cast<size_t>(g)]);
  }
  if (Hind.empty()) return SubspaceRelation::CrossesRelint;  // constraints vanished, u = 0 works

  // u* = H^T z with (H H^T) z = h; H here has independent rows so the Gram
  // matrix is nonsingular and plain elimination solves it exactly.
  const int q = static_cast<int>(Hind.size());
  std::vector<RationalVector> gram(static_cast<size_t>(q),
                                   RationalVector(static_cast<size_t>(q + 1), Rational(0)));
  for (int a = 0; a < q; ++a) {
    for (int bidx = 0; bidx < q; ++bidx) {
      Rational dot = 0;
      for (int cidx = 0; cidx < g; ++cidx)
        dot += Hind[static_cast<size_t>(a)][static_cast<size_t>(cidx)] *
               Hind[static_cast<size_t>(bidx)][static_cast<size_t>(cidx)];
      gram[static_cast<size_t>(a)][static_cast<size_t>(bidx)] = dot;
    }
    gram[static_cast<size_t>(a)][static_cast<size_t>(q)] = hind[static_cast<size_t>(a)];
  }
  std::vector<int> gp = rref(gram);
  if (static_cast<int>(gp.size()) != q) throw std::logic_error("gram system unexpectedly singular");
  RationalVector z(static_cast<size_t>(q));
  for (int a = 0; a < q; ++a) z[static_cast<size_t>(a)] = gram[static_cast<size_t>(a)][static_cast<size_t>(q)];
  Rational nsq = 0;
  for (int cidx = 0; cidx < g; ++cidx) {
    Rational u = 0;
    for (int a = 0; a < q; ++a)
      u += Hind[static_cast<size_t>(a)][static_cast<size_t>(cidx)] * z[static_cast<size_t>(a)];
    nsq += u * u;
  }
  if (nsq < 1) return SubspaceRelation::CrossesRelint;
  if (nsq == 1) return SubspaceRelation::Touches;
  return SubspaceRelation::Disjoint;
}

}  // namespace

std::vector<RationalVector> span_basis(const std::vector<RationalVector>& vecs) {
  std::vector<RationalVector> rows = vecs;
  std::vector<int> pivots = rref(rows);
  rows.resize(pivots.size());
  return rows;
}

bool in_span(const std::vector<RationalVector>& basis, const RationalVector& v) {
  std::vector<RationalVector> rows = basis;
  size_t before = span_basis(rows).size();
  rows = basis;
  rows.push_back(v);
  return span_basis(rows).size() == before;
}

BaseSetImage ellipsoid_image(const RationalMatrix& A, const MultifoldCone& cone, int i) {
  if (A.cols != cone.dim()) throw std::invalid_argument("ellipsoid_image: matrix/cone mismatch");
  if (i < 0 || i >= cone.block_count()) throw std::out_of_range("ellipsoid_image: block index");
  const ConeBlock& blk = cone.block(i);
  const int off = cone.offset(i);
  BaseSetImage img;
  img.block_index = i;
  if (blk.dim == 1) {
    img.kind = BaseSetImage::Kind::Point;
    img.vertices.push_back(A.column(off));
    return img;
  }
  if (blk.kind == ConeKind::Orthant) {
    img.kind = BaseSetImage::Kind::Polytope;
    for (int j = 0; j < blk.dim; ++j) img.vertices.push_back(A.column(off + j));
    return img;
  }
  if (blk.dim == 2) {
    // one generator: the ellipsoid is the segment center +- generator
    RationalVector lo = A.column(off), hi = A.column(off);
    for (int k = 0; k < A.rows; ++k) {
      lo[static_cast<size_t>(k)] -= A.at(k, off + 1);
      hi[static_cast<size_t>(k)] += A.at(k, off + 1);
    }
    img.kind = BaseSetImage::Kind::Polytope;
    img.vertices.push_back(std::move(lo));
    img.vertices.push_back(std::move(hi));
    return img;
  }
  img.kind = BaseSetImage::Kind::Ellipsoid;
  img.center = A.column(off);
  img.generators = RationalMatrix(A.rows, blk.dim - 1);
  for (int k = 0; k < A.rows; ++k)
    for (int j = 1; j < blk.dim; ++j) img.generators.at(k, j - 1) = A.at(k, off + j);
  return img;
}

LinealityBasis lineality_space_polyhedral(const RationalMatrix& A) {
  std::vector<RationalVector> members;
  for (int j = 0; j < A.cols; ++j) {
    RationalVector col = A.column(j);
    if (lineality_membership(A, col)) members.push_back(std::move(col));
  }
  LinealityBasis L;
  L.which = LinealityBasis::Which::OfAK;
  L.basis = span_basis(members);
  return L;
}

bool remark1_inclusion_check(const BaseSetImage& E, const LinealityBasis& L) {
  if (E.kind == BaseSetImage::Kind::Ellipsoid)
    throw std::invalid_argument("remark1_inclusion_check expects a polytopal image");
  if (E.vertices.empty()) throw std::invalid_argument("remark1_inclusion_check: no vertices");
  bool all_in = true;
  for (const RationalVector& v : E.vertices)
    if (!in_span(L.basis, v)) {
      all_in = false;
      break;
    }
  RationalVector avg(E.vertices[0].size(), Rational(0));
  for (const RationalVector& v : E.vertices)
    for (size_t k = 0; k < avg.size(); ++k) avg[k] += v[k];
  Rational inv(1, static_cast<unsigned long>(E.vertices.size()));
  for (Rational& q : avg) q *= inv;
  bool center_in = in_span(L.basis, avg);
  if (all_in != center_in)
    throw std::logic_error("relative-interior inclusion subtests disagree");
  return all_in;
}

GtPartition geometric_classify_polyhedral(const RationalMatrix& A) {
  GtPartition p;
  for (int j = 0; j < A.cols; ++j) {
    if (lineality_membership(A, A.column(j)))
      p.B.push_back(j);
    else
      p.N.push_back(j);
  }
  return p;
}

SubspaceRelation base_set_subspace_relation(const BaseSetImage& E,
                                            const std::vector<RationalVector>& subspace_basis) {
  switch (E.kind) {
    case BaseSetImage::Kind::Point:
      return in_span(subspace_basis, E.vertices.at(0)) ? SubspaceRelation::CrossesRelint
                                                       : SubspaceRelation::Disjoint;
    case BaseSetImage::Kind::Polytope:
      return polytope_relation(E.vertices, subspace_basis);
    default:
      return ellipsoid_relation(E.center, E.generators, subspace_basis);
  }
}

GeometricBaseSets proposition4_classify(const std::vector<BaseSetImage>& images,
                                        const LinealityBasis& lin_ak,
                                        const LinealityBasis& lin_cl_ak) {
  GeometricBaseSets out;
  for (size_t k = 0; k < images.size(); ++k) {
    int i = static_cast<int>(k);
    SubspaceRelation to_lin = base_set_subspace_relation(images[k], lin_ak.basis);
    SubspaceRelation to_cl = base_set_subspace_relation(images[k], lin_cl_ak.basis);
    if (to_lin == SubspaceRelation::CrossesRelint) out.B.push_back(i);
    if (to_cl == SubspaceRelation::Disjoint) out.N.push_back(i);
    if (to_cl == SubspaceRelation::CrossesRelint) out.B0.push_back(i);
    if (to_lin == SubspaceRelation::Disjoint) out.N0.push_back(i);
  }
  return out;
}

}  // namespace conepart
