#include "wavebt/wave.hpp"

#include "wavebt/simulate.hpp"

#include <cmath>

namespace wavebt {

const char* to_string(Representation r) {
  return r == Representation::impedance ? "impedance" : "scattering";
}

namespace {

Matrix selection_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(rows[i]);
  return out;
}

Vector selection(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

// Accretivity of Q with respect to the diagonal quadrature weight w:
// diag(w) Q + Q^T diag(w) >= 0.
bool weighted_accretive(const Matrix& q, const Vector& w, double tol) {
  if (q.rows() == 0) return true;
  const Matrix s = w.asDiagonal() * q + q.transpose() * w.asDiagonal();
  return is_psd(s, tol);
}

bool weighted_skew(const Matrix& q, const Vector& w, double tol) {
  if (q.rows() == 0) return true;
  const Matrix s = w.asDiagonal() * q + q.transpose() * w.asDiagonal();
  const double scale = 1.0 + (w.asDiagonal() * q).norm();
  return s.norm() <= scaled_tol(tol, scale);
}

}  // namespace

WaveBoundarySystem assemble_impedance_system(const DiscreteTriplet& triplet,
                                             const MaterialField& material,
                                             const DampingSpec& damping) {
  material.validate(triplet);
  const HamiltonianOperator ham = HamiltonianOperator::make(triplet, material);

  const int nc = triplet.num_cells();
  const int nf = triplet.num_faces();
  const int n = nc + nf;
  const int k1 = static_cast<int>(triplet.gamma1_dofs.size());
  const int k2 = static_cast<int>(triplet.gamma2_dofs.size());

  WaveBoundarySystem sys;
  sys.representation = Representation::impedance;
  sys.state_dim = n;
  sys.num_cells = nc;
  sys.num_faces = nf;
  sys.inv_rho = material.rho.cwiseInverse();
  sys.cell_weights = triplet.cell_weights;
  sys.weight_diag = ham.weight_diag();
  sys.gamma1_weights = selection(triplet.boundary_weights, triplet.gamma1_dofs);
  sys.gamma2_weights = selection(triplet.boundary_weights, triplet.gamma2_dofs);

  // Damping blocks, validated against the quadrature inner products.
  sys.qb = Matrix::Zero(k1, k1);
  if (damping.qb) {
    if (damping.qb->rows() != k1 || damping.qb->cols() != k1) {
      throw ValidationError("assemble_impedance_system: Qb must act on the gamma1 dofs");
    }
    if (!weighted_accretive(*damping.qb, sys.gamma1_weights, 1e-10)) {
      throw ValidationError("assemble_impedance_system: Qb is not accretive");
    }
    sys.qb = *damping.qb;
  }
  sys.qb_skew_adjoint = weighted_skew(sys.qb, sys.gamma1_weights, 1e-12);
  if (damping.qi) {
    if (damping.qi->rows() != nc || damping.qi->cols() != nc) {
      throw ValidationError("assemble_impedance_system: Qi must act on the cells");
    }
    if (!weighted_accretive(*damping.qi, triplet.cell_weights, 1e-10)) {
      throw ValidationError("assemble_impedance_system: Qi is not accretive");
    }
    sys.qi = *damping.qi;
    sys.qi_present = true;
  }

  const Vector inv_cw = triplet.cell_weights.cwiseInverse();
  const Vector tc = material.tcoef;

  const Matrix t0_g1 = selection_rows(triplet.trace_dirichlet, triplet.gamma1_dofs);
  const Matrix t0_g2 = selection_rows(triplet.trace_dirichlet, triplet.gamma2_dofs);
  const Matrix tperp_g2 = selection_rows(triplet.trace_normal, triplet.gamma2_dofs);

  // J H with the weak-form divergence: the strong Div splits as
  // -M_cell^{-1} Grad^T M_face plus the trace pairing, and the trace part is
  // exactly what the boundary terms below re-inject.
  Matrix m_sys = Matrix::Zero(n, n);
  m_sys.topRightCorner(nc, nf) =
      -(inv_cw.asDiagonal() * triplet.grad.transpose() *
        triplet.face_weights.asDiagonal() * tc.asDiagonal());
  m_sys.bottomLeftCorner(nf, nc) = triplet.grad * sys.inv_rho.asDiagonal();

  // gamma1 feedback: nu . sigma = -Qb v on gamma1, entered through the same
  // trace pairing as the input.
  if (k1 > 0) {
    m_sys.topLeftCorner(nc, nc) -=
        inv_cw.asDiagonal() * t0_g1.transpose() * sys.gamma1_weights.asDiagonal() *
        sys.qb * t0_g1 * sys.inv_rho.asDiagonal();
  }
  if (sys.qi_present) {
    m_sys.topLeftCorner(nc, nc) -= (*sys.qi) * sys.inv_rho.asDiagonal();
  }
  sys.m_sys = std::move(m_sys);

  sys.b2 = Matrix::Zero(n, k2);
  sys.b2.topRows(nc) =
      inv_cw.asDiagonal() * t0_g2.transpose() * sys.gamma2_weights.asDiagonal();
  sys.c2 = Matrix::Zero(k2, n);
  sys.c2.leftCols(nc) = t0_g2 * sys.inv_rho.asDiagonal();
  sys.stress_trace_g2 = Matrix::Zero(k2, n);
  sys.stress_trace_g2.rightCols(nf) = tperp_g2 * tc.asDiagonal();
  sys.v1_map = Matrix::Zero(k1, n);
  if (k1 > 0) sys.v1_map.leftCols(nc) = t0_g1 * sys.inv_rho.asDiagonal();
  return sys;
}

std::pair<Vector, Vector> external_cayley_signals(const Vector& u_imp,
                                                  const Vector& y_imp) {
  if (u_imp.size() != y_imp.size()) {
    throw ValidationError("external_cayley_signals: length mismatch");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {(u_imp + y_imp) * inv_sqrt2, (u_imp - y_imp) * inv_sqrt2};
}

WaveBoundarySystem assemble_scattering_system(const WaveBoundarySystem& impedance) {
  if (impedance.representation != Representation::impedance) {
    throw ValidationError("assemble_scattering_system: input must be in impedance form");
  }
  WaveBoundarySystem sys = impedance;
  sys.representation = Representation::scattering;
  sys.m_sys = impedance.m_sys - impedance.b2 * impedance.c2;
  sys.b2 = std::sqrt(2.0) * impedance.b2;
  // c2 keeps the velocity trace; the scattering output is u_s - sqrt(2) C2 x.
  return sys;
}

DisplacementSeries reconstruct_displacement(const SimulationTrace& trace,
                                            const Vector& z0,
                                            const MaterialField& material) {
  if (trace.snapshots_g.size() < 3) {
    throw ValidationError(
        "reconstruct_displacement: trace lacks state snapshots (need at least 3)");
  }
  if (z0.size() != trace.snapshots_g.front().size()) {
    throw ValidationError("reconstruct_displacement: z0 has wrong size");
  }
  const size_t pairs = (trace.snapshots_g.size() - 1) / 2;
  DisplacementSeries series;
  series.times.reserve(pairs + 1);
  series.z.reserve(pairs + 1);
  series.times.push_back(trace.snapshot_times.front());
  series.z.push_back(z0);
  Vector z = z0;
  for (size_t p = 0; p < pairs; ++p) {
    const size_t mid = 2 * p + 1;
    const double span = trace.snapshot_times[2 * p + 2] - trace.snapshot_times[2 * p];
    z += span * trace.snapshots_g[mid].cwiseQuotient(material.rho);
    series.times.push_back(trace.snapshot_times[2 * p + 2]);
    series.z.push_back(z);
  }
  return series;
}

}  // namespace wavebt
