#pragma once

#include "wavebt/relation.hpp"

#include <optional>
#include <string>

namespace wavebt {

struct DiscreteTriplet;
class HamiltonianOperator;

/// Boundary condition dom A = ker (W1 * B0 + W2 * Bperp), with W1, W2 both
/// k x m (boundary space B = R^m, target space K = R^k).
struct BoundaryConditionSpec {
  Matrix w1;
  Matrix w2;

  int boundary_dim() const { return static_cast<int>(w1.cols()); }
  int target_dim() const { return static_cast<int>(w1.rows()); }
  void validate() const;
};

enum class Generation {
  not_dissipative,
  contraction_semigroup,
  unitary_group,
  range_condition_fails,
};

const char* to_string(Generation g);

struct GenerationVerdict {
  Generation classification = Generation::not_dissipative;
  bool range_condition = false;
  bool sum_injective = false;
  bool symmetrized_psd = false;
  bool symmetrized_zero = false;
  bool kernel_dissipative = false;
  bool kernel_skew = false;
  std::optional<Matrix> v;  // contraction from the sum/difference solve, when it exists
  std::string diagnostics;
};

/// W1 W2^T + W2 W1^T, the k x k symmetrized boundary product.
Matrix symmetrized_product(const BoundaryConditionSpec& spec);

/// ran(W1 - W2) contained in ran(W1 + W2), decided by rank comparison.
bool check_range_condition(const BoundaryConditionSpec& spec, double tol = kRankTol);

struct ContractionSolve {
  Matrix v;                      // m x m solution of (W1 + W2) V = W1 - W2
  double residual = 0.0;         // ||(W1+W2)V - (W1-W2)||
  bool vvt_le_identity = false;  // V V^T <= I
};

/// Solves (W1 + W2) V = W1 - W2 by least squares and asserts the residual.
/// Requires W1 + W2 injective and the range condition.
ContractionSolve build_contraction_V(const BoundaryConditionSpec& spec,
                                     double tol = kRankTol);

/// Decides which semigroup the restricted operator generates, from the
/// boundary data alone. All outcomes are verdicts; nothing throws for
/// classifiable inputs.
GenerationVerdict classify_generator(const BoundaryConditionSpec& spec,
                                     double tol = kRankTol);

/// The relation ker [W1 W2] in B^2.
BoundaryRelation kernel_relation(const BoundaryConditionSpec& spec);

struct OracleReport {
  GenerationVerdict verdict;
  bool expected_contractive = false;
  double max_norm = 0.0;
  double unitary_deviation = 0.0;  // max | ||e^{At}||_H - 1 | over samples
  bool verdict_agrees = false;
};

/// Assembles the restricted generator on the given triplet and checks the
/// algebraic verdict against the weighted matrix-exponential certificate.
OracleReport certify_against_oracle(const BoundaryConditionSpec& spec,
                                    const DiscreteTriplet& triplet,
                                    const HamiltonianOperator& h);

}  // namespace wavebt
