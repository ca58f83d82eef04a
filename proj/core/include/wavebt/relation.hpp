#pragma once

#include "wavebt/linalg.hpp"

namespace wavebt {

/// A linear relation C in B^2 = R^{2m}, stored as a full-column-rank basis
/// whose columns are stacked pairs [f; e] (flow on top, effort below).
class BoundaryRelation {
 public:
  /// Validates shape (2m rows) and full column rank.
  BoundaryRelation(int space_dim, Matrix basis);

  /// Builds the relation spanned by the given (possibly redundant) columns,
  /// orthonormalizing and dropping near-dependent directions.
  static BoundaryRelation from_span(int space_dim, const Matrix& spanning);

  int space_dim() const { return space_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Matrix flow() const { return basis_.topRows(space_dim_); }
  Matrix effort() const { return basis_.bottomRows(space_dim_); }

 private:
  int space_dim_;
  Matrix basis_;  // 2m x k
};

/// Re <f, e> <= 0 on all of C, tested as F^T E + E^T F <= 0.
bool is_dissipative(const BoundaryRelation& c, double tol = kRankTol);

/// Re <f, e> = 0 on all of C: ||F^T E + E^T F|| <= tol * (1 + ||basis||^2).
bool is_skew_symmetric_relation(const BoundaryRelation& c, double tol = kRankTol);

/// Dissipative and of dimension m. In finite dimension the pairing has
/// signature (m, m), so dissipative subspaces of dimension m admit no
/// proper dissipative extension.
bool is_maximal_dissipative(const BoundaryRelation& c, double tol = kRankTol);

/// [0 I; I 0] * (C orthogonal complement); carries dom A* per Thm-style
/// adjoint flip. Result has dimension 2m - dim C.
BoundaryRelation flip_orthogonal_complement(const BoundaryRelation& c);

/// The Cayley image V : e - f -> e + f of a maximal dissipative relation;
/// an m x m contraction. Throws if C is not maximal dissipative.
Matrix relation_to_contraction(const BoundaryRelation& c);

/// ker [I+V, I-V] for a contraction V (operator norm <= 1 + tol);
/// always maximal dissipative of dimension m.
BoundaryRelation contraction_to_relation(const Matrix& v, double tol = 1e-9);

/// Subspace equality via the projector gap (principal angles).
bool same_relation(const BoundaryRelation& a, const BoundaryRelation& b,
                   double tol = kSubspaceTol);

}  // namespace wavebt
