#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <vector>

namespace wavebt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when an input violates an operation's preconditions.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a computation fails to meet its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative rank/solve tolerance used consistently for rank decisions.
inline constexpr double kRankTol = 1e-10;

/// Gap threshold for subspace-equality decisions (sin of largest principal angle).
inline constexpr double kSubspaceTol = 1e-8;

/// Relative tolerance with an absolute floor, so zero-scale inputs stay decidable.
inline double scaled_tol(double rel, double scale) {
  return std::max(rel * scale, 1e-14);
}

/// e^{At} by scaling-and-squaring with a Pade core. Requires square A with
/// finite entries and t >= 0.
Matrix matrix_exponential(const Matrix& a, double t);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// True iff the smallest eigenvalue of (symmetric) m is >= -tol*(1+||m||).
/// Throws if m is asymmetric beyond tol*(1+||m||).
bool is_psd(const Matrix& m, double tol = kRankTol);

/// Norm induced by an SPD weight W = R^T R: ||R m R^{-1}||_2.
double weighted_operator_norm(const Matrix& m, const Matrix& weight);

struct ContractionReport {
  double max_norm = 0.0;          // max over sampled times of ||e^{At}||_W
  bool pass = false;              // max_norm <= 1 + 1e-9
  std::vector<double> times;
  std::vector<double> norms;      // per-sample weighted norms
};

/// 20 log-spaced sample times in [1e-3, 10].
std::vector<double> default_certificate_times();

/// Samples ||e^{At}|| in the weight-induced norm and reports the maximum.
/// weight must be symmetric positive definite.
ContractionReport contraction_certificate(const Matrix& a, const Matrix& weight,
                                          std::span<const double> times);
ContractionReport contraction_certificate(const Matrix& a, const Matrix& weight);

/// Rank with singular values below rel_tol * sigma_max treated as zero.
int numeric_rank(const Matrix& m, double rel_tol = kRankTol);

/// Orthonormal basis of the kernel of m (columns). May have zero columns.
Matrix nullspace(const Matrix& m, double rel_tol = kRankTol);

/// Orthonormal basis of the column span of m, truncated at rel_tol * sigma_max.
Matrix orthonormal_columns(const Matrix& m, double rel_tol = kRankTol);

/// ||P_A - P_B||_2 for the orthogonal projectors onto the column spans;
/// equals the sine of the largest principal angle when dimensions agree.
double subspace_gap(const Matrix& a, const Matrix& b);

}  // namespace wavebt
