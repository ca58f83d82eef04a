#include "wavebt/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace wavebt {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

Matrix matrix_exponential(const Matrix& a, double t) {
  if (a.rows() != a.cols()) {
    throw ValidationError("matrix_exponential: matrix must be square");
  }
  if (!all_finite(a) || !std::isfinite(t)) {
    throw ValidationError("matrix_exponential: non-finite input");
  }
  if (t < 0.0) {
    throw ValidationError("matrix_exponential: t must be nonnegative");
  }
  if (t == 0.0 || a.rows() == 0) {
    return Matrix::Identity(a.rows(), a.cols());
  }
  return Matrix((a * t).exp());
}

double operator_norm(const Matrix& m) {
  if (!all_finite(m)) {
    throw ValidationError("operator_norm: non-finite input");
  }
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  // BDCSVD falls back to Jacobi below its blocking threshold, so small
  // matrices keep full accuracy.
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

bool is_psd(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw ValidationError("is_psd: matrix must be square");
  }
  if (!all_finite(m)) {
    throw ValidationError("is_psd: non-finite input");
  }
  if (m.rows() == 0) return true;
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > scaled_tol(tol, scale)) {
    throw ValidationError("is_psd: matrix asymmetric beyond tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) >= -tol * (1.0 + operator_norm(m));
}

double weighted_operator_norm(const Matrix& m, const Matrix& weight) {
  if (weight.rows() != weight.cols() || weight.rows() != m.rows() ||
      m.rows() != m.cols()) {
    throw ValidationError("weighted_operator_norm: dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(weight);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("weighted_operator_norm: weight is not positive definite");
  }
  const Matrix r = llt.matrixU();  // weight = R^T R
  const Matrix rinv =
      r.triangularView<Eigen::Upper>().solve(Matrix::Identity(r.rows(), r.cols()));
  return operator_norm(r * m * rinv);
}

std::vector<double> default_certificate_times() {
  // Log-spaced: transient overshoot shows up early, asymptotic growth late.
  constexpr int kCount = 20;
  constexpr double kLo = 1e-3, kHi = 10.0;
  std::vector<double> times(kCount);
  for (int i = 0; i < kCount; ++i) {
    times[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kCount - 1));
  }
  return times;
}

ContractionReport contraction_certificate(const Matrix& a, const Matrix& weight,
                                          std::span<const double> times) {
  ContractionReport report;
  Eigen::LLT<Matrix> llt(weight);
  if (llt.info() != Eigen::Success) {
    throw ValidationError("contraction_certificate: weight is not positive definite");
  }
  const Matrix r = llt.matrixU();
  const Matrix rinv =
      r.triangularView<Eigen::Upper>().solve(Matrix::Identity(r.rows(), r.cols()));
  for (double t : times) {
    const double n = operator_norm(r * matrix_exponential(a, t) * rinv);
    report.times.push_back(t);
    report.norms.push_back(n);
    report.max_norm = std::max(report.max_norm, n);
  }
  report.pass = report.max_norm <= 1.0 + 1e-9;
  return report;
}

ContractionReport contraction_certificate(const Matrix& a, const Matrix& weight) {
  const auto times = default_certificate_times();
  return contraction_certificate(a, weight, times);
}

int numeric_rank(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double cut = scaled_tol(rel_tol, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return rank;
}

Matrix nullspace(const Matrix& m, double rel_tol) {
  if (m.cols() == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = scaled_tol(rel_tol, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

Matrix orthonormal_columns(const Matrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Matrix(m.rows(), 0);
  const double cut = scaled_tol(rel_tol, sv(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

double subspace_gap(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ValidationError("subspace_gap: ambient dimensions differ");
  }
  const Matrix qa = orthonormal_columns(a);
  const Matrix qb = orthonormal_columns(b);
  const Matrix pa = qa * qa.transpose();
  const Matrix pb = qb * qb.transpose();
  return operator_norm(pa - pb);
}

}  // namespace wavebt
