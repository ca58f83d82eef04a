#include "wavebt/certifier.hpp"

#include "wavebt/material.hpp"
#include "wavebt/triplet.hpp"

#include <sstream>

namespace wavebt {

void BoundaryConditionSpec::validate() const {
  if (w1.rows() != w2.rows() || w1.cols() != w2.cols()) {
    throw ValidationError("BoundaryConditionSpec: W1 and W2 must have equal shape");
  }
  if (!w1.allFinite() || !w2.allFinite()) {
    throw ValidationError("BoundaryConditionSpec: non-finite entries");
  }
}

const char* to_string(Generation g) {
  switch (g) {
    case Generation::not_dissipative: return "not_dissipative";
    case Generation::contraction_semigroup: return "contraction_semigroup";
    case Generation::unitary_group: return "unitary_group";
    case Generation::range_condition_fails: return "range_condition_fails";
  }
  return "unknown";
}

Matrix symmetrized_product(const BoundaryConditionSpec& spec) {
  spec.validate();
  return spec.w1 * spec.w2.transpose() + spec.w2 * spec.w1.transpose();
}

bool check_range_condition(const BoundaryConditionSpec& spec, double tol) {
  spec.validate();
  const Matrix sum = spec.w1 + spec.w2;
  Matrix augmented(sum.rows(), 2 * sum.cols());
  augmented.leftCols(sum.cols()) = sum;
  augmented.rightCols(sum.cols()) = spec.w1 - spec.w2;
  return numeric_rank(sum, tol) == numeric_rank(augmented, tol);
}

ContractionSolve build_contraction_V(const BoundaryConditionSpec& spec, double tol) {
  spec.validate();
  const Matrix sum = spec.w1 + spec.w2;
  const Matrix diff = spec.w1 - spec.w2;
  const int m = spec.boundary_dim();
  if (m == 0) {
    return ContractionSolve{Matrix(0, 0), 0.0, true};
  }
  Eigen::BDCSVD<Matrix> svd(sum);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < scaled_tol(kRankTol, sv(0))) {
    throw ValidationError("build_contraction_V: W1 + W2 is not injective");
  }
  if (!check_range_condition(spec, tol)) {
    throw ValidationError("build_contraction_V: range condition ran(W1-W2) <= ran(W1+W2) fails");
  }
  ContractionSolve out;
  out.v = Eigen::ColPivHouseholderQR<Matrix>(sum).solve(diff);
  // The range condition guarantees exact solvability; assert rather than trust.
  out.residual = (sum * out.v - diff).norm();
  const double scale = sum.norm() + diff.norm();
  if (out.residual > scaled_tol(tol, scale)) {
    throw NumericalError("build_contraction_V: least-squares residual exceeds tolerance");
  }
  out.vvt_le_identity =
      is_psd(Matrix(Matrix::Identity(m, m) - out.v * out.v.transpose()), 1e-9);
  return out;
}

BoundaryRelation kernel_relation(const BoundaryConditionSpec& spec) {
  spec.validate();
  const int m = spec.boundary_dim();
  Matrix wb(spec.target_dim(), 2 * m);
  wb.leftCols(m) = spec.w1;
  wb.rightCols(m) = spec.w2;
  return BoundaryRelation(m, nullspace(wb));
}

GenerationVerdict classify_generator(const BoundaryConditionSpec& spec, double tol) {
  spec.validate();
  GenerationVerdict verdict;
  std::ostringstream diag;

  const BoundaryRelation kernel = kernel_relation(spec);
  verdict.kernel_dissipative = is_dissipative(kernel, tol);
  verdict.kernel_skew = is_skew_symmetric_relation(kernel, tol);

  const Matrix sum = spec.w1 + spec.w2;
  if (spec.boundary_dim() > 0 && sum.size() > 0) {
    Eigen::BDCSVD<Matrix> svd(sum);
    const auto& sv = svd.singularValues();
    verdict.sum_injective =
        sv.size() >= spec.boundary_dim() &&
        sv(spec.boundary_dim() - 1) >= scaled_tol(kRankTol, sv(0));
  } else {
    verdict.sum_injective = true;
  }

  const Matrix symm = symmetrized_product(spec);
  verdict.symmetrized_psd = is_psd(symm, tol);
  const double symm_scale =
      1.0 + spec.w1.squaredNorm() + spec.w2.squaredNorm();
  verdict.symmetrized_zero = symm.size() == 0 ||
      symm.cwiseAbs().maxCoeff() <= scaled_tol(tol, symm_scale);

  verdict.range_condition = check_range_condition(spec, tol);

  if (!verdict.range_condition) {
    verdict.classification = Generation::range_condition_fails;
    diag << "range condition fails; kernel relation is "
         << (verdict.kernel_dissipative ? "dissipative" : "not dissipative")
         << " (decides contractivity directly in finite dimension)";
  } else if (!verdict.kernel_dissipative) {
    verdict.classification = Generation::not_dissipative;
    diag << "ker [W1 W2] contains a pair with positive Re <f, e>";
  } else if (verdict.kernel_skew && verdict.symmetrized_zero) {
    verdict.classification = Generation::unitary_group;
    diag << "kernel skew-symmetric and W1 W2^T + W2 W1^T = 0";
  } else {
    verdict.classification = Generation::contraction_semigroup;
    diag << "kernel dissipative, W1 + W2 injective"
         << (verdict.sum_injective ? "" : " (numerically borderline)")
         << ", symmetrized product PSD"
         << (verdict.symmetrized_psd ? "" : " (numerically borderline)");
  }

  if (verdict.range_condition && verdict.sum_injective) {
    try {
      verdict.v = build_contraction_V(spec, tol).v;
    } catch (const std::exception&) {
      // Borderline injectivity; verdict stands on the kernel tests.
    }
  }
  verdict.diagnostics = diag.str();
  return verdict;
}

OracleReport certify_against_oracle(const BoundaryConditionSpec& spec,
                                    const DiscreteTriplet& triplet,
                                    const HamiltonianOperator& h) {
  spec.validate();
  if (spec.boundary_dim() != triplet.boundary_dim()) {
    throw ValidationError(
        "certify_against_oracle: spec boundary dimension does not match triplet");
  }
  OracleReport report;
  report.verdict = classify_generator(spec);

  const Matrix a_red = restrict_generator(triplet, h, spec);
  // restrict_generator returns coordinates in an H-orthonormal basis, so the
  // H-weighted operator norm is the Euclidean one there.
  const Matrix eye = Matrix::Identity(a_red.rows(), a_red.cols());
  const ContractionReport cert = contraction_certificate(a_red, eye);

  report.max_norm = cert.max_norm;
  for (double n : cert.norms) {
    report.unitary_deviation = std::max(report.unitary_deviation, std::abs(n - 1.0));
  }

  const Generation c = report.verdict.classification;
  report.expected_contractive =
      c == Generation::contraction_semigroup || c == Generation::unitary_group ||
      (c == Generation::range_condition_fails && report.verdict.kernel_dissipative);

  bool agrees = report.expected_contractive == cert.pass;
  if (agrees && c == Generation::unitary_group) {
    agrees = report.unitary_deviation <= 1e-8;
  }
  report.verdict_agrees = agrees;
  return report;
}

}  // namespace wavebt
