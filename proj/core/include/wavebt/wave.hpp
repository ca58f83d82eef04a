#pragma once

#include "wavebt/material.hpp"
#include "wavebt/triplet.hpp"

#include <optional>
#include <utility>

namespace wavebt {

struct SimulationTrace;

/// Interior damping Qi (on cells, applied to the velocity field) and boundary
/// damping Qb (on the gamma1 dofs). Both must be accretive with respect to
/// the corresponding quadrature inner product.
struct DampingSpec {
  std::optional<Matrix> qi;
  std::optional<Matrix> qb;
};

enum class Representation { impedance, scattering };

const char* to_string(Representation r);

/// Assembled first-order system. In impedance form,
///   x' = M_sys x + B2 u,   y = C2 x,
/// with M_sys = (J - D_gamma1 - R_i) H; boundary data enters through the
/// input map after discrete integration by parts, so the system is an ODE
/// and the power balance
///   dE/dt = 2<u, y> - 2<Qb v1, v1> - 2<Qi v, v>
/// holds exactly along midpoint trajectories. The scattering form feeds
/// u = sqrt(2) u_s - y back into the same structure.
struct WaveBoundarySystem {
  Representation representation = Representation::impedance;
  int state_dim = 0;
  int num_cells = 0;
  int num_faces = 0;

  Matrix m_sys;            // state x state
  Matrix b2;               // state x k2 input map
  Matrix c2;               // k2 x state velocity trace on gamma2
  Matrix stress_trace_g2;  // k2 x state co-normal stress on gamma2 (G map)
  Matrix v1_map;           // k1 x state velocity trace on gamma1

  Matrix qb;               // k1 x k1 (zero matrix when absent)
  std::optional<Matrix> qi;
  bool qb_skew_adjoint = true;   // w.r.t. the gamma1 quadrature inner product
  bool qi_present = false;

  Vector gamma1_weights;   // quadrature weights of gamma1 dofs
  Vector gamma2_weights;   // quadrature weights of gamma2 dofs
  Vector weight_diag;      // M H diagonal defining the energy
  Vector inv_rho;          // per cell
  Vector cell_weights;     // per cell

  int gamma1_dim() const { return static_cast<int>(v1_map.rows()); }
  int gamma2_dim() const { return static_cast<int>(c2.rows()); }

  double energy(const Vector& x) const {
    return x.dot(weight_diag.cwiseProduct(x));
  }
  /// <a, b> on gamma2 with quadrature weights.
  double gamma2_inner(const Vector& a, const Vector& b) const {
    return a.dot(gamma2_weights.cwiseProduct(b));
  }
  /// <Qb v1, v1> on gamma1 with quadrature weights.
  double gamma1_damping_power(const Vector& v1) const {
    if (v1.size() == 0) return 0.0;
    return (qb * v1).dot(gamma1_weights.cwiseProduct(v1));
  }
  /// <Qi v, v> over the cells with volume weights.
  double interior_damping_power(const Vector& v) const {
    if (!qi_present) return 0.0;
    return ((*qi) * v).dot(cell_weights.cwiseProduct(v));
  }
};

/// Builds the impedance-form system of a wave model with the given damping.
WaveBoundarySystem assemble_impedance_system(const DiscreteTriplet& triplet,
                                             const MaterialField& material,
                                             const DampingSpec& damping);

/// Unitary signal change (u, y) -> ((u + y)/sqrt(2), (u - y)/sqrt(2)).
std::pair<Vector, Vector> external_cayley_signals(const Vector& u_imp,
                                                  const Vector& y_imp);

/// Closed-loop realization driven by the scattering input: the state map
/// gains a -B2 C2 feedback and the input map a factor sqrt(2).
WaveBoundarySystem assemble_scattering_system(const WaveBoundarySystem& impedance);

struct DisplacementSeries {
  std::vector<double> times;
  std::vector<Vector> z;  // per-cell displacement at each time
};

/// Integrates dz/dt = g / rho through the stored state snapshots with the
/// composite midpoint rule over pairs of snapshot intervals; second order in
/// the snapshot spacing.
DisplacementSeries reconstruct_displacement(const SimulationTrace& trace,
                                            const Vector& z0,
                                            const MaterialField& material);

}  // namespace wavebt
