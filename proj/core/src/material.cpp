#include "wavebt/material.hpp"

namespace wavebt {

MaterialField MaterialField::constant(const DiscreteTriplet& triplet, double rho_value,
                                      double t_value, double delta) {
  MaterialField m;
  m.rho = Vector::Constant(triplet.num_cells(), rho_value);
  m.tcoef = Vector::Constant(triplet.num_faces(), t_value);
  m.delta = delta;
  m.validate(triplet);
  return m;
}

void MaterialField::validate(const DiscreteTriplet& triplet) const {
  if (rho.size() != triplet.num_cells()) {
    throw ValidationError("MaterialField: rho must have one value per cell");
  }
  if (tcoef.size() != triplet.num_faces()) {
    throw ValidationError("MaterialField: T must have one value per face");
  }
  if (!(delta > 0.0)) {
    throw ValidationError("MaterialField: positivity floor delta must be positive");
  }
  if (rho.size() == 0 || rho.minCoeff() < delta) {
    throw ValidationError("MaterialField: rho drops below the positivity floor");
  }
  if (tcoef.size() == 0 || tcoef.minCoeff() < delta) {
    throw ValidationError("MaterialField: T drops below the positivity floor");
  }
  if (!rho.allFinite() || !tcoef.allFinite()) {
    throw ValidationError("MaterialField: non-finite coefficients");
  }
}

HamiltonianOperator HamiltonianOperator::make(const DiscreteTriplet& triplet,
                                              const MaterialField& material) {
  material.validate(triplet);
  const int nc = triplet.num_cells();
  const int nf = triplet.num_faces();
  Vector h_diag(nc + nf);
  h_diag.head(nc) = material.rho.cwiseInverse();
  h_diag.tail(nf) = material.tcoef;
  Vector m_diag(nc + nf);
  m_diag.head(nc) = triplet.cell_weights;
  m_diag.tail(nf) = triplet.face_weights;
  return HamiltonianOperator(std::move(h_diag), std::move(m_diag));
}

}  // namespace wavebt
