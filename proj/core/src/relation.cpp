#include "wavebt/relation.hpp"

namespace wavebt {

BoundaryRelation::BoundaryRelation(int space_dim, Matrix basis)
    : space_dim_(space_dim), basis_(std::move(basis)) {
  if (space_dim_ < 0) {
    throw ValidationError("BoundaryRelation: negative space dimension");
  }
  if (basis_.size() == 0 && basis_.rows() == 0) {
    basis_.resize(2 * space_dim_, 0);
  }
  if (basis_.rows() != 2 * space_dim_) {
    throw ValidationError("BoundaryRelation: basis must have 2*m rows");
  }
  if (!basis_.allFinite()) {
    throw ValidationError("BoundaryRelation: non-finite basis");
  }
  if (basis_.cols() > basis_.rows()) {
    throw ValidationError("BoundaryRelation: more columns than ambient dimension");
  }
  if (numeric_rank(basis_) != basis_.cols()) {
    throw ValidationError("BoundaryRelation: rank-deficient basis");
  }
}

BoundaryRelation BoundaryRelation::from_span(int space_dim, const Matrix& spanning) {
  if (spanning.rows() != 2 * space_dim) {
    throw ValidationError("BoundaryRelation::from_span: spanning set must have 2*m rows");
  }
  return BoundaryRelation(space_dim, orthonormal_columns(spanning));
}

namespace {

// Symmetrized pairing F^T E + E^T F restricted to the basis; its sign
// behaviour encodes Re <f, e> on the span.
Matrix pairing_gram(const BoundaryRelation& c) {
  const Matrix f = c.flow();
  const Matrix e = c.effort();
  return f.transpose() * e + e.transpose() * f;
}

}  // namespace

bool is_dissipative(const BoundaryRelation& c, double tol) {
  if (c.dim() == 0) return true;  // vacuous
  return is_psd(-pairing_gram(c), tol);
}

bool is_skew_symmetric_relation(const BoundaryRelation& c, double tol) {
  if (c.dim() == 0) return true;
  const double scale = 1.0 + c.basis().squaredNorm();
  return operator_norm(pairing_gram(c)) <= tol * scale;
}

bool is_maximal_dissipative(const BoundaryRelation& c, double tol) {
  return c.dim() == c.space_dim() && is_dissipative(c, tol);
}

BoundaryRelation flip_orthogonal_complement(const BoundaryRelation& c) {
  const int m = c.space_dim();
  const Matrix complement = nullspace(Matrix(c.basis().transpose()));
  Matrix flipped(2 * m, complement.cols());
  flipped.topRows(m) = complement.bottomRows(m);
  flipped.bottomRows(m) = complement.topRows(m);
  return BoundaryRelation(m, flipped);
}

Matrix relation_to_contraction(const BoundaryRelation& c) {
  if (!is_maximal_dissipative(c)) {
    throw ValidationError(
        "relation_to_contraction: relation is not maximal dissipative");
  }
  const int m = c.space_dim();
  if (m == 0) return Matrix(0, 0);
  const Matrix f = c.flow();
  const Matrix e = c.effort();
  // Maximal dissipativity makes E - F invertible, so dom V is all of B.
  const Matrix emf = e - f;
  Eigen::FullPivLU<Matrix> lu(emf);
  if (!lu.isInvertible()) {
    throw NumericalError("relation_to_contraction: e - f map is numerically singular");
  }
  const Matrix v = (e + f) * lu.inverse();
  const double scale = c.basis().norm();
  const double residual = (v * emf - (e + f)).norm();
  if (residual > scaled_tol(1e-10, scale)) {
    throw NumericalError("relation_to_contraction: defining equation residual too large");
  }
  if (operator_norm(v) > 1.0 + 1e-9) {
    throw NumericalError("relation_to_contraction: result is not a contraction");
  }
  return v;
}

BoundaryRelation contraction_to_relation(const Matrix& v, double tol) {
  if (v.rows() != v.cols()) {
    throw ValidationError("contraction_to_relation: V must be square");
  }
  if (operator_norm(v) > 1.0 + tol) {
    throw ValidationError("contraction_to_relation: V is not a contraction");
  }
  const int m = static_cast<int>(v.rows());
  Matrix w(m, 2 * m);
  w.leftCols(m) = Matrix::Identity(m, m) + v;
  w.rightCols(m) = Matrix::Identity(m, m) - v;
  return BoundaryRelation(m, nullspace(w));
}

bool same_relation(const BoundaryRelation& a, const BoundaryRelation& b, double tol) {
  if (a.space_dim() != b.space_dim()) return false;
  return subspace_gap(a.basis(), b.basis()) <= tol;
}

}  // namespace wavebt
