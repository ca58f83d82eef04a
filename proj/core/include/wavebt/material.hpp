#pragma once

#include "wavebt/triplet.hpp"

namespace wavebt {

/// Mass density per cell and elasticity coefficient per face, both bounded
/// below by a positivity floor delta.
struct MaterialField {
  Vector rho;    // per cell
  Vector tcoef;  // per face
  double delta = 1e-8;

  static MaterialField constant(const DiscreteTriplet& triplet, double rho_value,
                                double t_value, double delta = 1e-8);
  void validate(const DiscreteTriplet& triplet) const;
};

/// Diagonal energy operator H = diag(1/rho, T) together with the volume
/// weights M; the physical energy is E(x) = x^T M H x.
class HamiltonianOperator {
 public:
  static HamiltonianOperator make(const DiscreteTriplet& triplet,
                                  const MaterialField& material);

  int state_dim() const { return static_cast<int>(h_diag_.size()); }
  const Vector& h_diag() const { return h_diag_; }
  const Vector& volume_diag() const { return m_diag_; }
  /// Diagonal of the energy weight M H.
  Vector weight_diag() const { return m_diag_.cwiseProduct(h_diag_); }

  Vector apply(const Vector& x) const { return h_diag_.cwiseProduct(x); }
  double energy(const Vector& x) const {
    return x.dot(m_diag_.cwiseProduct(h_diag_).cwiseProduct(x));
  }
  double inner(const Vector& x, const Vector& y) const {
    return x.dot(m_diag_.cwiseProduct(h_diag_).cwiseProduct(y));
  }

 private:
  HamiltonianOperator(Vector h_diag, Vector m_diag)
      : h_diag_(std::move(h_diag)), m_diag_(std::move(m_diag)) {}

  Vector h_diag_;  // (1/rho | tcoef)
  Vector m_diag_;  // (cell weights | face weights)
};

}  // namespace wavebt
